"""Seeded synthetic corpora with a known bulletin -> tweet lead of one day.

The driving bulletin score follows a random walk around a base level (so the
levels carry a unit root, as real daily category shares tend to), and the
tweet score on day t is ``coef`` times the bulletin score on day t-1 plus
noise. Scores are realised as token counts: a bulletin of ``bulletin_tokens``
words holds round(share * length) category words, and the day's tweets split
the tweet share the same way. A few uncoupled categories get independent
walks so the outputs are not mostly empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

import numpy as np

from .corpus import Document, Source
from .lexicon import Lexicon, default_lexicon
from .textprep import PrepConfig

# neutral words: not stopwords, not in the lemma list, not in any bundled category
FILLER = (
    "today", "news", "city", "area", "update", "week", "road", "team", "data", "list",
    "report", "note", "time", "year", "river", "north", "south", "east", "west", "village",
    "district", "statement", "morning", "evening", "number", "sector", "local", "public",
    "notice", "press", "detail", "period", "region", "centre", "level", "total",
)


@dataclass(frozen=True)
class LeadLagSpec:
    days: int = 45
    start: date = date(2020, 3, 1)
    region: str = "delhi"
    category: str = "medical_emergency"
    coef: float = 0.8
    base: float = 0.3
    step: float = 0.01
    noise: float = 0.01
    bulletin_tokens: int = 400
    tweets_per_day: int = 20
    tweet_tokens: int = 20
    extra_categories: tuple[str, ...] = ("government", "health", "hygiene")
    extra_base: float = 0.05
    extra_step: float = 0.004


def signal_words(lex: Lexicon, category: str, cfg: PrepConfig | None = None) -> list[str]:
    """Unigrams that score only ``category`` and cannot form a bigram entry."""
    bigram_parts = {p for entries in lex.categories.values() for e in entries if "_" in e
                    for p in e.split("_")}
    words = []
    for e in sorted(lex[category]):
        if "_" in e or e in bigram_parts or lex.categories_of(e) != (category,):
            continue
        if cfg is not None and (e in cfg.stopwords or e in cfg.lemma_dict):
            continue
        words.append(e)
    if not words:
        raise ValueError(f"category {category!r} has no exclusive unigram entries")
    return words


def lead_lag_shares(spec: LeadLagSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(bulletin, tweet) daily category shares for the coupled category."""
    walk = np.cumsum(rng.standard_normal(spec.days + 1))
    x = spec.base + spec.step * walk
    eta = rng.standard_normal(spec.days)
    y = spec.coef * x[:-1] + spec.noise * eta
    return np.clip(x[1:], 0.0, 1.0), np.clip(y, 0.0, 1.0)


def _walk(rng, days, base, step):
    return np.clip(base + step * np.cumsum(rng.standard_normal(days)), 0.0, 1.0)


def _document_text(rng, length: int, counts: dict[str, int], vocab: dict[str, list[str]]) -> str:
    words = []
    for cat, k in counts.items():
        words += list(rng.choice(vocab[cat], size=k))
    words += list(rng.choice(FILLER, size=max(length - len(words), 0)))
    rng.shuffle(words)
    return " ".join(words)


def generate_documents(
    seed: int,
    spec: LeadLagSpec = LeadLagSpec(),
    lex: Lexicon | None = None,
) -> tuple[list[Document], dict[str, np.ndarray]]:
    """Build bulletins and tweets for one region.

    Returns the documents and the designed daily shares, keyed
    ``"bulletin"`` / ``"tweet"`` for the coupled category.
    """
    lex = lex or default_lexicon()
    cfg = PrepConfig.default()
    rng = np.random.default_rng(seed)
    cats = (spec.category,) + tuple(c for c in spec.extra_categories if c != spec.category)
    vocab = {c: signal_words(lex, c, cfg) for c in cats}

    x, y = lead_lag_shares(spec, rng)
    extras = {
        src: {c: _walk(rng, spec.days, spec.extra_base, spec.extra_step) for c in cats[1:]}
        for src in (Source.BULLETIN, Source.TWEET)
    }

    docs: list[Document] = []
    tweet_total = spec.tweets_per_day * spec.tweet_tokens
    for t in range(spec.days):
        day = spec.start + timedelta(days=t)
        midnight = datetime.combine(day, time(0, 0), tzinfo=timezone.utc)

        counts = {spec.category: int(round(x[t] * spec.bulletin_tokens))}
        for c, s in extras[Source.BULLETIN].items():
            counts[c] = int(round(s[t] * spec.bulletin_tokens))
        docs.append(Document(
            id=f"{day.isoformat()}_{spec.region}",
            timestamp=midnight,
            region=spec.region,
            source=Source.BULLETIN,
            text=_document_text(rng, spec.bulletin_tokens, counts, vocab),
        ))

        # spread the day's category words over tweets round-robin
        totals = {spec.category: int(round(y[t] * tweet_total))}
        for c, s in extras[Source.TWEET].items():
            totals[c] = int(round(s[t] * tweet_total))
        if sum(totals.values()) > tweet_total:
            raise ValueError(f"day {day}: category words exceed the tweet token budget")
        per_tweet = [dict.fromkeys(cats, 0) for _ in range(spec.tweets_per_day)]
        slot = 0
        for c, k in totals.items():
            for _ in range(k):
                while sum(per_tweet[slot % spec.tweets_per_day].values()) >= spec.tweet_tokens:
                    slot += 1
                per_tweet[slot % spec.tweets_per_day][c] += 1
                slot += 1
        for i, cnt in enumerate(per_tweet):
            docs.append(Document(
                id=f"{seed}-{t}-{i}",
                timestamp=midnight + timedelta(hours=8, minutes=i),
                region=spec.region,
                source=Source.TWEET,
                text=_document_text(rng, spec.tweet_tokens, cnt, vocab),
                user_location="New Delhi, India",
            ))
    return docs, {"bulletin": x, "tweet": y}


def write_corpus(
    out_dir: str | Path,
    seed: int = 0,
    spec: LeadLagSpec = LeadLagSpec(),
) -> dict[str, Path]:
    """Write ``bulletins/``, ``tweets.jsonl`` and a ready-to-run ``config.toml``."""
    out = Path(out_dir)
    bdir = out / "bulletins"
    bdir.mkdir(parents=True, exist_ok=True)
    docs, _ = generate_documents(seed, spec)
    tweet_lines = []
    for d in docs:
        if d.source is Source.BULLETIN:
            (bdir / f"{d.day.isoformat()}_{d.region}.txt").write_text(d.text + "\n", encoding="utf-8")
        else:
            tweet_lines.append(json.dumps({
                "id": d.id,
                "created_at": d.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "text": d.text,
                "region": d.region,
                "user_location": d.user_location,
            }, sort_keys=True))
    tweets = out / "tweets.jsonl"
    tweets.write_text("\n".join(tweet_lines) + "\n", encoding="utf-8")
    end = spec.start + timedelta(days=spec.days - 1)
    config = out / "config.toml"
    config.write_text(
        "# synthetic lead-lag corpus\n"
        f"seed = {seed}\n\n"
        "[inputs]\n"
        'tweets = ["tweets.jsonl"]\n'
        'bulletins = "bulletins"\n\n'
        "[window]\n"
        f"start = {spec.start.isoformat()}\n"
        f"end = {end.isoformat()}\n\n"
        "[output]\n"
        'dir = "out"\n',
        encoding="utf-8",
    )
    return {"bulletins": bdir, "tweets": tweets, "config": config}
