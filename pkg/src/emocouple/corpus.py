"""Document ingestion, collection-query generation and user-location filtering."""

from __future__ import annotations

import csv
import enum
import json
import logging
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timezone, tzinfo
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import EmptyCorpus, EmptyRegionSpec, SchemaError, UnreadablePath

logger = logging.getLogger(__name__)

UNASSIGNED = "unassigned-national"

REQUIRED_FIELDS = ("id", "timestamp", "text")
# accepted spellings for the timestamp field
TIMESTAMP_KEYS = ("created_at", "timestamp")

_BULLETIN_NAME = re.compile(r"^(\d{4}-\d{2}-\d{2})_(.+)\.txt$")
# Twitter v1.1 style: "Wed Oct 10 20:19:24 +0000 2018"
_TWITTER_TS = "%a %b %d %H:%M:%S %z %Y"


class Source(str, enum.Enum):
    TWEET = "Tweet"
    BULLETIN = "Bulletin"

    @classmethod
    def parse(cls, value: "str | Source") -> "Source":
        if isinstance(value, Source):
            return value
        for member in cls:
            if value.lower() in (member.value.lower(), member.name.lower()):
                return member
        raise ValueError(f"unknown source {value!r}")


@dataclass(frozen=True)
class Document:
    id: str
    timestamp: datetime
    region: str
    source: Source
    text: str
    user_location: str | None = None

    @property
    def day(self) -> date:
        return self.timestamp.date()

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "timestamp": self.timestamp.isoformat(),
            "region": self.region,
            "source": self.source.value,
            "text": self.text,
            "user_location": self.user_location,
        }

    @classmethod
    def from_record(cls, rec: dict, tz: tzinfo = timezone.utc) -> "Document":
        return cls(
            id=str(rec["id"]),
            timestamp=parse_timestamp(rec["timestamp"], tz),
            region=rec.get("region") or "",
            source=Source.parse(rec["source"]),
            text=rec["text"],
            user_location=rec.get("user_location"),
        )


@dataclass
class LoadResult:
    """Documents read from one input plus bookkeeping for the ingest report."""

    documents: list[Document]
    skipped: int = 0
    total: int = 0
    skip_reasons: dict[str, int] = field(default_factory=dict)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __len__(self) -> int:
        return len(self.documents)


def _norm_name(s: str) -> str:
    return " ".join(s.lower().split())


@dataclass(frozen=True)
class RegionSpec:
    canonical_name: str
    aliases: tuple[str, ...] = ()
    cities: tuple[str, ...] = ()
    code: str = ""

    def __post_init__(self):
        name = _norm_name(self.canonical_name)
        if not name:
            raise EmptyRegionSpec("region canonical_name is empty")
        object.__setattr__(self, "canonical_name", name)
        seen = {name}
        for attr in ("aliases", "cities"):
            cleaned = []
            for entry in getattr(self, attr):
                e = _norm_name(entry)
                if e and e not in seen:
                    seen.add(e)
                    cleaned.append(e)
            object.__setattr__(self, attr, tuple(cleaned))
        object.__setattr__(self, "code", self.code.strip() or name)

    @property
    def names(self) -> tuple[str, ...]:
        return (self.canonical_name,) + self.aliases

    @property
    def match_terms(self) -> tuple[str, ...]:
        return self.names + self.cities


@dataclass(frozen=True)
class QuerySet:
    region: str
    plain_queries: tuple[str, ...]
    hashtags: tuple[str, ...]


def parse_timestamp(value: str, tz: tzinfo = timezone.utc) -> datetime:
    """Parse RFC3339 / ISO-8601 (or Twitter's legacy format) and convert to ``tz``.

    Naive timestamps are taken to be UTC. A bare ``YYYY-MM-DD`` is midnight
    in ``tz``.
    """
    value = str(value).strip()
    if not value:
        raise ValueError("empty timestamp")
    if len(value) == 10:
        # bare calendar date: midnight in the target zone, never shifted
        return datetime.combine(date.fromisoformat(value), datetime.min.time(), tzinfo=tz)
    try:
        iso = value[:-1] + "+00:00" if value.endswith(("Z", "z")) else value
        dt = datetime.fromisoformat(iso)
    except ValueError:
        dt = datetime.strptime(value, _TWITTER_TS)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(tz)


def _in_window(dt: datetime, window: tuple[date, date] | None) -> bool:
    if window is None:
        return True
    return window[0] <= dt.date() <= window[1]


def _record_to_document(rec: dict, source: Source, tz: tzinfo) -> Document:
    ts = next((rec[k] for k in TIMESTAMP_KEYS if rec.get(k) not in (None, "")), None)
    if ts is None or rec.get("id") in (None, "") or rec.get("text") is None:
        raise KeyError("missing required field")
    loc = rec.get("user_location")
    return Document(
        id=str(rec["id"]),
        timestamp=parse_timestamp(ts, tz),
        region=str(rec.get("region") or ""),
        source=source,
        text=str(rec["text"]),
        user_location=str(loc) if loc not in (None, "") else None,
    )


def _missing_fields(rec: dict) -> set[str]:
    missing = set()
    if rec.get("id") in (None, ""):
        missing.add("id")
    if all(rec.get(k) in (None, "") for k in TIMESTAMP_KEYS):
        missing.add("created_at")
    if rec.get("text") is None:
        missing.add("text")
    return missing


def _iter_jsonl(path: Path) -> Iterator[dict | None]:
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                yield None
                continue
            yield obj if isinstance(obj, dict) else None


def _iter_csv(path: Path) -> Iterator[dict | None]:
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or ())
        missing = set()
        if "id" not in header:
            missing.add("id")
        if not header.intersection(TIMESTAMP_KEYS):
            missing.add("created_at")
        if "text" not in header:
            missing.add("text")
        if missing:
            raise SchemaError(missing, where=f"{path} header")
        for row in reader:
            yield row


def _iter_bulletins(path: Path) -> Iterator[tuple[str, dict | None]]:
    for f in sorted(path.glob("*.txt")):
        m = _BULLETIN_NAME.match(f.name)
        if not m:
            yield f.name, None
            continue
        try:
            text = f.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError):
            yield f.name, None
            continue
        yield f.name, {"id": f.stem, "timestamp": m.group(1), "region": m.group(2), "text": text}


def load_documents(
    path: str | Path,
    format: str,
    source: Source | str,
    *,
    window: tuple[date, date] | None = None,
    tz: tzinfo = timezone.utc,
) -> LoadResult:
    """Read one input into Documents, in file order.

    ``format`` is one of ``jsonl``, ``csv`` or ``bulletin_text_dir``. Records
    that are malformed, duplicated, or fall outside ``window`` are skipped and
    counted; ``valid + skipped == total`` always holds.
    """
    path = Path(path)
    source = Source.parse(source)
    if not path.exists():
        raise UnreadablePath(path, "does not exist")

    if format == "bulletin_text_dir":
        if not path.is_dir():
            raise UnreadablePath(path, "is not a directory")
        raw: Iterable = (rec for _, rec in _iter_bulletins(path))
    elif format in ("jsonl", "csv"):
        if not path.is_file():
            raise UnreadablePath(path, "is not a file")
        raw = _iter_jsonl(path) if format == "jsonl" else _iter_csv(path)
    else:
        raise ValueError(f"unknown format {format!r}")

    result = LoadResult(documents=[])
    seen_ids: set[str] = set()
    missing_union: set[str] = set()
    any_complete = False

    def skip(reason: str) -> None:
        result.skipped += 1
        result.skip_reasons[reason] = result.skip_reasons.get(reason, 0) + 1

    try:
        for rec in raw:
            result.total += 1
            if rec is None:
                skip("malformed")
                continue
            missing = _missing_fields(rec)
            if missing:
                missing_union |= missing
                skip("missing_field")
                continue
            any_complete = True
            try:
                doc = _record_to_document(rec, source, tz)
            except (KeyError, ValueError, TypeError):
                skip("bad_timestamp")
                continue
            if doc.id in seen_ids:
                skip("duplicate_id")
                continue
            if not _in_window(doc.timestamp, window):
                skip("outside_window")
                continue
            seen_ids.add(doc.id)
            result.documents.append(doc)
    except UnicodeDecodeError as exc:
        raise UnreadablePath(path, f"not valid UTF-8 ({exc.reason})") from exc
    except OSError as exc:
        raise UnreadablePath(path, str(exc)) from exc

    if result.skipped:
        logger.warning("%s: skipped %d of %d records %s", path, result.skipped, result.total,
                       result.skip_reasons)
    if not result.documents:
        if missing_union and not any_complete:
            raise SchemaError(missing_union, where=str(path))
        raise EmptyCorpus(f"{path}: no valid documents ({result.total} records read)")
    return result


def generate_queries(
    region: RegionSpec,
    prefixes: Sequence[str],
    hashtag_prefixes: Sequence[str] = (),
) -> QuerySet:
    """Build the collection queries for one region.

    Plain queries join each prefix with the region name and each alias
    (``"corona " + "odisha"``). Hashtags are ``#<prefix><name>`` with spaces
    removed, plus ``#<name>fightscorona`` for every name.
    """
    if not prefixes:
        raise ValueError("prefixes must be non-empty")
    names = region.names
    plain = {(p + n).lower() for p in prefixes for n in names}
    tags = set()
    for n in names:
        body = n.replace(" ", "")
        for hp in hashtag_prefixes:
            tags.add("#" + hp.lstrip("#").replace(" ", "").lower() + body)
        tags.add("#" + body + "fightscorona")
    return QuerySet(region=region.code, plain_queries=tuple(sorted(plain)), hashtags=tuple(sorted(tags)))


def _term_pattern(terms: Iterable[str]) -> re.Pattern:
    alts = sorted({re.escape(t) for t in terms}, key=lambda s: (-len(s), s))
    return re.compile(r"(?<![a-z0-9])(?:" + "|".join(alts) + r")(?![a-z0-9])")


def location_matches(location: str, region: RegionSpec) -> bool:
    """Whole-word match of any region name/alias/city inside a lowercased location."""
    return bool(_term_pattern(region.match_terms).search(location.lower()))


def filter_by_location(
    docs: Iterable[Document],
    country_key: str,
    regions: Sequence[RegionSpec],
) -> dict[str, list[Document]]:
    """Country filter first, then region assignment by location keywords.

    A document matching several regions lands in each of them. Documents that
    pass the country filter but match no region go to ``UNASSIGNED``.
    """
    key_pat = _term_pattern([country_key.lower()])
    patterns = [(r.code, _term_pattern(r.match_terms)) for r in regions]
    buckets: dict[str, list[Document]] = {r.code: [] for r in regions}
    buckets[UNASSIGNED] = []
    for doc in docs:
        if not doc.user_location:
            continue
        loc = doc.user_location.lower()
        if not key_pat.search(loc):
            continue
        hit = False
        for code, pat in patterns:
            if pat.search(loc):
                buckets[code].append(doc)
                hit = True
        if not hit:
            buckets[UNASSIGNED].append(doc)
    return buckets


def dedup_by_id(docs: Iterable[Document]) -> list[Document]:
    seen: set[tuple[str, str]] = set()
    out = []
    for d in docs:
        key = (d.source.value, d.id)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def load_region_specs(path: str | Path) -> list[RegionSpec]:
    """Read region specs from a TOML file of ``[[region]]`` tables."""
    from ._toml import load_toml

    data = load_toml(path)
    regions = []
    for entry in data.get("region", []):
        regions.append(RegionSpec(
            canonical_name=entry.get("name", ""),
            aliases=tuple(entry.get("aliases", ())),
            cities=tuple(entry.get("cities", ())),
            code=entry.get("code", ""),
        ))
    return regions


def bulletin_date(filename: str) -> date:
    m = _BULLETIN_NAME.match(Path(filename).name)
    if not m:
        raise ValueError(f"bulletin filename must look like YYYY-MM-DD_<region>.txt: {filename}")
    return date.fromisoformat(m.group(1))


