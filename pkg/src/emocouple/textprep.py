"""Six-step tweet/bulletin cleaning: lowercase, tokenize, drop links, keep
letters only, drop stopwords, lemmatize."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

_NON_ALPHA = re.compile(r"[^a-z]+")
_TLDS = "com|org|net|gov|edu|int|in|co|uk|io|ly|me|info|news|tv|gl|gd|to|be|us"
# domain-looking tokens without a scheme: t.co/abc, bit.ly/x, who.int, example.com/path
_BARE_URL = re.compile(
    r"^[\w-]+(?:\.[\w-]+)*\.(?:" + _TLDS + r")(?:[/?#]\S*)?[.,;:!?)\]]*$"
)


def _data_path(name: str) -> Path:
    return Path(str(resources.files("emocouple") / "data" / name))


def read_stopwords(path: str | Path) -> frozenset[str]:
    """One word per line. Entries are reduced to their letter-only form, since
    that is what tokens look like by the time stopwords are checked."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        w = _NON_ALPHA.sub("", line.lower())
        if w:
            words.add(w)
    return frozenset(words)


def read_lemma_dict(path: str | Path) -> dict[str, str]:
    """Two tab-separated columns: surface form, lemma."""
    lemmas = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>lemma'")
        lemmas[parts[0].strip().lower()] = parts[1].strip().lower()
    return lemmas


def check_idempotent(lemma_dict: Mapping[str, str]) -> None:
    bad = [(s, l, lemma_dict[l]) for s, l in lemma_dict.items() if l in lemma_dict and lemma_dict[l] != l]
    if bad:
        s, l, ll = bad[0]
        raise ValueError(f"lemma dictionary is not idempotent: {s}->{l} but {l}->{ll}")


@dataclass(frozen=True)
class PrepConfig:
    stopwords: frozenset[str] = frozenset()
    lemma_dict: Mapping[str, str] = field(default_factory=dict)
    keep_hashtag_bodies: bool = True

    def __post_init__(self):
        check_idempotent(self.lemma_dict)

    @classmethod
    def from_files(
        cls,
        stopword_files: Iterable[str | Path] = (),
        lemma_file: str | Path | None = None,
        keep_hashtag_bodies: bool = True,
    ) -> "PrepConfig":
        stop: set[str] = set()
        for f in stopword_files:
            stop |= read_stopwords(f)
        lemmas = read_lemma_dict(lemma_file) if lemma_file else {}
        return cls(frozenset(stop), lemmas, keep_hashtag_bodies)

    @classmethod
    def default(cls) -> "PrepConfig":
        """English stopwords and the bundled lemma list."""
        return cls.from_files(
            [_data_path("stopwords_english.txt")], _data_path("lemmas_english.tsv")
        )


def is_link(token: str) -> bool:
    token = token.lstrip("\"'([<{")
    if token.startswith(("http", "www.")) or "://" in token:
        return True
    return bool(_BARE_URL.match(token))


def lemmatize(token: str, lemma_dict: Mapping[str, str]) -> str:
    return lemma_dict.get(token, token)


def preprocess(raw: str, cfg: PrepConfig) -> list[str]:
    tokens = raw.lower().split()
    out = []
    for tok in tokens:
        if is_link(tok):
            continue
        if tok.startswith("#") and not cfg.keep_hashtag_bodies:
            continue
        tok = _NON_ALPHA.sub("", tok)
        # letters left over from something like "ht.tp://" are link debris
        if not tok or tok.startswith("http"):
            continue
        if tok in cfg.stopwords:
            continue
        tok = lemmatize(tok, cfg.lemma_dict)
        # a lemma can itself be a stopword of another configured language
        if tok in cfg.stopwords:
            continue
        out.append(tok)
    return out
