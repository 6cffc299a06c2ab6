"""Run configuration: TOML file + command-line overrides, validation, hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from datetime import date, timezone, tzinfo
from pathlib import Path
from typing import Any, Mapping

from ._toml import load_toml
from .errors import ConfigError, UnreadablePath
from .series import GAP_POLICIES, MODES
from .econ.granger import LAG_MODELS

@dataclass
class RunConfig:
    tweets: list[str] = field(default_factory=list)
    tweet_format: str = "auto"
    bulletins: str | None = None
    lexicon: str | None = None
    modifications: str | None = None
    sentiment_lexicon: str | None = None
    stopwords: list[str] = field(default_factory=list)
    lemma_dict: str | None = None
    regions: str | None = None
    start: date | None = None
    end: date | None = None
    tweet_start: date | None = None
    tweet_end: date | None = None
    bulletin_start: date | None = None
    bulletin_end: date | None = None
    timezone: str = "UTC"
    country_key: str = "india"
    dedup: bool = True
    keep_hashtag_bodies: bool = True
    aggregation: str = "mean_normalized"
    gap_policy: str = "zero"
    adf_max_lag: int = 4
    granger_max_lag: int = 4
    granger_lag_model: str = "restricted"
    chatter_top_n: int = 200
    chatter_exclude: list[str] = field(default_factory=lambda: ["india"])
    seed: int = 0
    out: str = "out"
    store: str | None = None
    base_dir: str = "."

    # --- construction -------------------------------------------------------

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], base_dir: str | Path = ".") -> "RunConfig":
        flat: dict[str, Any] = {}
        for key, value in data.items():
            if isinstance(value, dict):
                for sub, v in value.items():
                    flat[_alias(key, sub)] = v
            else:
                flat[key] = value
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(flat) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        cfg = cls(base_dir=str(base_dir))
        for key, value in flat.items():
            cfg.set(key, value)
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise UnreadablePath(path, "config file does not exist")
        return cls.from_mapping(load_toml(path), base_dir=path.parent)

    def set(self, key: str, value: Any) -> None:
        """Assign one key, coercing strings from the command line."""
        types = {f.name: f.type for f in fields(self)}
        if key not in types:
            raise ConfigError(f"unknown config key: {key}")
        t = str(types[key])
        try:
            if "date" in t and value is not None and not isinstance(value, date):
                value = date.fromisoformat(str(value))
            elif t.startswith("list") and isinstance(value, str):
                value = [v for v in value.split(",") if v]
            elif t == "int" and not isinstance(value, int):
                value = int(value)
            elif t == "bool" and isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                value = value.lower() in ("true", "1", "yes")
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
        setattr(self, key, value)

    # --- derived ------------------------------------------------------------

    def path(self, p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else Path(self.base_dir) / q

    @property
    def out_dir(self) -> Path:
        return self.path(self.out)

    @property
    def store_path(self) -> Path:
        return self.path(self.store) if self.store else self.out_dir / "store.jsonl"

    @property
    def tz(self) -> tzinfo:
        if self.timezone.upper() == "UTC":
            return timezone.utc
        from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

        try:
            return ZoneInfo(self.timezone)
        except (ZoneInfoNotFoundError, ValueError) as exc:
            raise ConfigError(f"unknown timezone {self.timezone!r}") from exc

    def window(self, source: str) -> tuple[date, date] | None:
        start = getattr(self, f"{source}_start") or self.start
        end = getattr(self, f"{source}_end") or self.end
        if start is None and end is None:
            return None
        return (start or date.min, end or date.max)

    def validate(self, need_inputs: bool = True) -> None:
        """Check values and that every configured file exists.

        ``need_inputs`` additionally requires tweet and bulletin inputs to be set.
        """
        if self.aggregation not in MODES:
            raise ConfigError(f"aggregation must be one of {MODES}")
        if self.gap_policy not in GAP_POLICIES:
            raise ConfigError(f"gap_policy must be one of {GAP_POLICIES}")
        if self.granger_lag_model not in LAG_MODELS:
            raise ConfigError(f"granger_lag_model must be one of {LAG_MODELS}")
        if self.adf_max_lag < 0 or self.granger_max_lag < 1:
            raise ConfigError("adf_max_lag must be >= 0 and granger_max_lag >= 1")
        if self.tweet_format not in ("auto", "jsonl", "csv"):
            raise ConfigError("tweet_format must be auto, jsonl or csv")
        for src in ("tweet", "bulletin"):
            w = self.window(src)
            if w and w[0] > w[1]:
                raise ConfigError(f"{src} window start {w[0]} is after end {w[1]}")
        _ = self.tz
        if need_inputs and not self.tweets:
            raise ConfigError("no tweet inputs configured")
        if need_inputs and not self.bulletins:
            raise ConfigError("no bulletin directory configured")
        for p in self.input_paths():
            if not p.exists():
                raise UnreadablePath(p, "does not exist")

    def input_paths(self) -> list[Path]:
        out = [self.path(t) for t in self.tweets]
        out += [self.path(s) for s in self.stopwords]
        for key in ("bulletins", "lexicon", "modifications", "sentiment_lexicon",
                    "lemma_dict", "regions"):
            v = getattr(self, key)
            if v and v != "none":
                out.append(self.path(v))
        return out

    def to_dict(self) -> dict:
        """Settings that influence results (output locations excluded)."""
        d = asdict(self)
        for k in ("out", "store", "base_dir"):
            d.pop(k)
        return {k: (v.isoformat() if isinstance(v, date) else v) for k, v in d.items()}


def _alias(section: str, key: str) -> str:
    # sections are only for readability; keys are flat except [output] dir
    return "out" if (section, key) == ("output", "dir") else key


def _hash_path(h, p: Path) -> None:
    if p.is_dir():
        for f in sorted(p.rglob("*")):
            if f.is_file():
                h.update(f.relative_to(p).as_posix().encode())
                h.update(f.read_bytes())
    elif p.is_file():
        h.update(p.read_bytes())


def config_hash(cfg: RunConfig) -> str:
    """SHA-256 over the effective settings and the bytes of every input."""
    h = hashlib.sha256()
    h.update(json.dumps(cfg.to_dict(), sort_keys=True).encode())
    for p in cfg.input_paths():
        h.update(b"\0")
        _hash_path(h, p)
    return h.hexdigest()
