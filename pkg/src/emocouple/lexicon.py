"""Category lexicons: loading, manual corrections, and per-document scoring."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ._toml import load_toml
from .errors import (
    DuplicateCategory,
    EmptyLexicon,
    ParseError,
    UnknownCategory,
    UnreadablePath,
)
from .textprep import _data_path

_WS = re.compile(r"[\s_]+")


def normalize_entry(text: str) -> str:
    """``"Positive Case"`` and ``"positive_case"`` both become ``positive_case``."""
    return "_".join(p for p in _WS.split(text.strip().lower()) if p)


normalize_category = normalize_entry


class Lexicon:
    """Immutable mapping of category name to a frozenset of entries."""

    def __init__(self, categories: Mapping[str, Iterable[str]]):
        cats = {}
        for name, entries in categories.items():
            cats[name] = frozenset(entries)
        self._cats = MappingProxyType(dict(sorted(cats.items())))
        index: dict[str, list[str]] = {}
        for name, entries in self._cats.items():
            for e in entries:
                index.setdefault(e, []).append(name)
        self._index = {e: tuple(c) for e, c in index.items()}

    @property
    def categories(self) -> Mapping[str, frozenset[str]]:
        return self._cats

    def __getitem__(self, name: str) -> frozenset[str]:
        return self._cats[name]

    def __contains__(self, name: object) -> bool:
        return name in self._cats

    def __iter__(self):
        return iter(self._cats)

    def __len__(self) -> int:
        return len(self._cats)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lexicon) and dict(self._cats) == dict(other._cats)

    def __repr__(self) -> str:
        return f"Lexicon({len(self._cats)} categories)"

    def categories_of(self, entry: str) -> tuple[str, ...]:
        return self._index.get(entry, ())


@dataclass(frozen=True)
class LexiconModification:
    category: str
    add_tokens: tuple[str, ...] = ()
    remove_tokens: tuple[str, ...] = ()
    create_if_missing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "category", normalize_category(self.category))
        add = tuple(normalize_entry(t) for t in self.add_tokens)
        rem = tuple(normalize_entry(t) for t in self.remove_tokens)
        clash = set(add) & set(rem)
        if clash:
            raise ValueError(f"{self.category}: tokens both added and removed: {sorted(clash)}")
        object.__setattr__(self, "add_tokens", add)
        object.__setattr__(self, "remove_tokens", rem)


@dataclass(frozen=True)
class CategoryScores:
    raw: Mapping[str, int]
    normalized: Mapping[str, float]
    total_tokens: int


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str] = field(default_factory=frozenset)
    negative: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        both = self.positive & self.negative
        if both:
            raise ValueError(f"words marked both positive and negative: {sorted(both)[:5]}")


def _read_lines(path: str | Path) -> list[str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError as exc:
        raise UnreadablePath(path, "does not exist") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadablePath(path, str(exc)) from exc


def _entry(text: str, lineno: int, path) -> str:
    e = normalize_entry(text)
    if not e:
        raise ParseError("empty entry", lineno, path)
    if e.count("_") > 1:
        raise ParseError(f"entry {text.strip()!r} has more than two words", lineno, path)
    return e


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a category lexicon.

    Two layouts are accepted (one per file): a header line naming the category
    followed by indented entries, or one ``category<TAB>entry`` pair per line.
    Lines starting with ``#`` are comments.
    """
    cats: dict[str, set[str]] = {}
    style = None
    current = None
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        indented = line[0] in " \t"
        if indented:
            this = "header"
        elif "\t" in line:
            this = "pairs"
        else:
            this = "header"
        if style is None:
            style = this
        elif style != this:
            raise ParseError("mixes 'category<TAB>entry' lines with header/indent layout", lineno, path)

        if this == "pairs":
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected exactly one tab separator", lineno, path)
            cat = normalize_category(parts[0])
            if not cat:
                raise ParseError("empty category name", lineno, path)
            cats.setdefault(cat, set()).add(_entry(parts[1], lineno, path))
        elif indented:
            if current is None:
                raise ParseError("entry before any category header", lineno, path)
            cats[current].add(_entry(line, lineno, path))
        else:
            cat = normalize_category(line)
            if cat in cats:
                raise DuplicateCategory(f"{path}:{lineno}: category {cat!r} defined twice")
            cats[cat] = set()
            current = cat

    if not cats:
        raise EmptyLexicon(f"{path}: no categories")
    return Lexicon(cats)


def apply_modifications(lex: Lexicon, mods: Sequence[LexiconModification]) -> Lexicon:
    cats = {name: set(entries) for name, entries in lex.categories.items()}
    for mod in mods:
        if mod.category not in cats:
            if not mod.create_if_missing:
                raise UnknownCategory(mod.category)
            cats[mod.category] = set()
        cats[mod.category] -= set(mod.remove_tokens)
        cats[mod.category] |= set(mod.add_tokens)
    return Lexicon(cats)


def load_modifications(path: str | Path) -> list[LexiconModification]:
    """TOML file of ``[[modification]]`` tables with ``category``, ``add``,
    ``remove`` and optional ``create_if_missing``."""
    data = load_toml(path)
    mods = []
    for rec in data.get("modification", []):
        if "category" not in rec:
            raise ParseError("modification without 'category'", path=path)
        mods.append(LexiconModification(
            category=rec["category"],
            add_tokens=tuple(rec.get("add", ())),
            remove_tokens=tuple(rec.get("remove", ())),
            create_if_missing=bool(rec.get("create_if_missing", False)),
        ))
    return mods


def score(tokens: Sequence[str], lex: Lexicon) -> CategoryScores:
    """Count lexicon hits per category.

    Every token position whose token is an entry counts once, and every
    adjacent pair whose ``a_b`` join is an entry counts once more. The
    normalized score divides by the token count (empty documents score 0)
    and is capped at 1, which only bites when a category holds both words of
    a matched bigram as unigrams too.
    """
    raw = dict.fromkeys(lex.categories, 0)
    for tok in tokens:
        for c in lex.categories_of(tok):
            raw[c] += 1
    for a, b in zip(tokens, tokens[1:]):
        for c in lex.categories_of(f"{a}_{b}"):
            raw[c] += 1
    n = len(tokens)
    denom = max(n, 1)
    normalized = {c: min(v / denom, 1.0) for c, v in raw.items()}
    return CategoryScores(raw=raw, normalized=normalized, total_tokens=n)


def load_sentiment_lexicon(path: str | Path) -> SentimentLexicon:
    """``word<TAB>positive`` / ``word<TAB>negative`` per line (``+1``/``-1`` also accepted)."""
    pos, neg = set(), set()
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected 'word<TAB>polarity'", lineno, path)
        word, pol = parts[0].strip().lower(), parts[1].strip().lower()
        if pol in ("positive", "+1", "1", "pos"):
            pos.add(word)
        elif pol in ("negative", "-1", "neg"):
            neg.add(word)
        else:
            raise ParseError(f"unknown polarity {pol!r}", lineno, path)
    both = pos & neg
    if both:
        raise ParseError(f"word(s) listed with both polarities: {sorted(both)[:5]}", path=path)
    return SentimentLexicon(frozenset(pos), frozenset(neg))


def sentiment_of(token: str, slex: SentimentLexicon) -> int:
    if token in slex.positive:
        return 1
    if token in slex.negative:
        return -1
    return 0


def default_lexicon(modified: bool = True) -> Lexicon:
    lex = load_lexicon(_data_path("empath_base.txt"))
    if modified:
        lex = apply_modifications(lex, load_modifications(_data_path("covid_modifications.toml")))
    return lex


def default_sentiment_lexicon() -> SentimentLexicon:
    return load_sentiment_lexicon(_data_path("sentiment_english.tsv"))
