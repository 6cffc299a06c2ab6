"""Daily emotion series: aggregation from scored documents, differencing,
alignment, and CSV export."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Document, Source
from .errors import CategoryMismatch, EmptySelection, NoOverlap, TooShort
from .lexicon import CategoryScores

logger = logging.getLogger(__name__)

MODES = ("mean_normalized", "pooled")
GAP_POLICIES = ("zero", "carry_forward")
SERIES_COLUMNS = ("date", "region", "source", "category", "value")


@dataclass(frozen=True, eq=False)
class EmotionSeries:
    region: str
    source: Source
    category: str
    start_date: date
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.ndim != 1 or len(vals) < 1:
            raise ValueError("series needs at least one value")
        if not np.all(np.isfinite(vals)):
            raise ValueError("series values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)

    @property
    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self.values))]

    @property
    def label(self) -> str:
        return self.source.value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmotionSeries):
            return NotImplemented
        return (
            (self.region, self.source, self.category, self.start_date)
            == (other.region, other.source, other.category, other.start_date)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return (f"EmotionSeries({self.region}/{self.source.value}/{self.category}, "
                f"{self.start_date}..{self.end_date}, n={len(self)})")


@dataclass(frozen=True)
class PairedSeries:
    y: EmotionSeries
    x: EmotionSeries

    @property
    def n(self) -> int:
        return len(self.y)


def _day_range(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


def aggregate_all(
    scored: Iterable[tuple[Document, CategoryScores]],
    categories: Sequence[str],
    region: str,
    source: Source | str,
    mode: str = "mean_normalized",
    gap_policy: str = "zero",
    start: date | None = None,
    end: date | None = None,
) -> dict[str, EmotionSeries]:
    """One daily series per category for a (region, source) selection.

    ``mean_normalized`` averages per-document normalized scores over the day;
    ``pooled`` divides the day's summed raw hits by its summed token count.
    Days without documents are zero-filled or carry the previous value.
    Sums go through ``math.fsum`` so the result does not depend on document order.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if gap_policy not in GAP_POLICIES:
        raise ValueError(f"gap_policy must be one of {GAP_POLICIES}")
    source = Source.parse(source)

    per_day: dict[date, list[CategoryScores]] = {}
    for doc, sc in scored:
        if doc.region != region or doc.source != source:
            continue
        d = doc.day
        if (start and d < start) or (end and d > end):
            continue
        per_day.setdefault(d, []).append(sc)
    if not per_day:
        raise EmptySelection(f"no documents for region={region!r} source={source.value}")

    first = start or min(per_day)
    last = end or max(per_day)
    days = _day_range(first, last)
    missing = [d for d in days if d not in per_day]
    if missing:
        logger.warning("%s/%s: %d of %d days without documents, gap policy %s",
                       region, source.value, len(missing), len(days), gap_policy)

    out = {}
    for cat in categories:
        values = []
        prev = 0.0
        for d in days:
            docs = per_day.get(d)
            if docs is None:
                v = prev if gap_policy == "carry_forward" else 0.0
            elif mode == "mean_normalized":
                v = math.fsum(s.normalized.get(cat, 0.0) for s in docs) / len(docs)
            else:
                total = sum(s.total_tokens for s in docs)
                v = sum(s.raw.get(cat, 0) for s in docs) / total if total else 0.0
            values.append(v)
            prev = v
        out[cat] = EmotionSeries(region, source, cat, first, np.array(values))
    return out


def aggregate(
    scored: Iterable[tuple[Document, CategoryScores]],
    category: str,
    region: str,
    source: Source | str,
    mode: str = "mean_normalized",
    gap_policy: str = "zero",
    start: date | None = None,
    end: date | None = None,
) -> EmotionSeries:
    return aggregate_all(scored, [category], region, source, mode, gap_policy, start, end)[category]


def difference(s: EmotionSeries) -> EmotionSeries:
    if len(s) < 2:
        raise TooShort(f"cannot difference a series of length {len(s)}")
    return replace(s, start_date=s.start_date + timedelta(days=1), values=np.diff(s.values))


def _truncate(s: EmotionSeries, start: date, end: date) -> EmotionSeries:
    i = (start - s.start_date).days
    j = (end - s.start_date).days + 1
    return replace(s, start_date=start, values=s.values[i:j])


def align(a: EmotionSeries, b: EmotionSeries, allow_category_mismatch: bool = False) -> PairedSeries:
    """Cut both series to their common date range; ``a`` becomes ``y``."""
    if a.category != b.category and not allow_category_mismatch:
        raise CategoryMismatch(f"{a.category!r} vs {b.category!r}")
    start = max(a.start_date, b.start_date)
    end = min(a.end_date, b.end_date)
    if (end - start).days + 1 < 2:
        raise NoOverlap(
            f"{a.label} {a.start_date}..{a.end_date} and {b.label} {b.start_date}..{b.end_date} "
            "share fewer than 2 days"
        )
    return PairedSeries(_truncate(a, start, end), _truncate(b, start, end))


def series_to_csv(series: Iterable[EmotionSeries], footer: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_COLUMNS)
    for s in series:
        for d, v in zip(s.dates, s.values):
            w.writerow([d.isoformat(), s.region, s.source.value, s.category, repr(float(v))])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def read_series_csv(path: str | Path) -> list[EmotionSeries]:
    rows: dict[tuple[str, str, str], list[tuple[date, float]]] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        lines = (ln for ln in fh if not ln.startswith("#"))
        for row in csv.DictReader(lines):
            key = (row["region"], row["source"], row["category"])
            rows.setdefault(key, []).append((date.fromisoformat(row["date"]), float(row["value"])))
    out = []
    for (region, source, cat), pts in rows.items():
        pts.sort()
        start = pts[0][0]
        if [d for d, _ in pts] != _day_range(start, pts[-1][0]):
            raise ValueError(f"{path}: {region}/{source}/{cat} has non-contiguous dates")
        out.append(EmotionSeries(region, Source.parse(source), cat, start, np.array([v for _, v in pts])))
    return out
