"""Document-to-table workflow shared by the CLI and the library entry points."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Sequence

from .corpus import UNASSIGNED, Document, Source
from .econ.adf import adf_levels_and_difference
from .econ.granger import GrangerBatch, granger_pairwise
from .errors import AnalysisError, EmocoupleError
from .lexicon import CategoryScores, Lexicon, score
from .report import AdfRow, adf_row
from .series import EmotionSeries, aggregate_all, align
from .textprep import PrepConfig, preprocess


@dataclass(frozen=True)
class AnalysisSettings:
    mode: str = "mean_normalized"
    gap_policy: str = "zero"
    adf_max_lag: int = 4
    granger_max_lag: int = 4
    granger_lag_model: str = "restricted"
    tweet_window: tuple[date, date] | None = None
    bulletin_window: tuple[date, date] | None = None

    def window(self, source: Source) -> tuple[date, date] | None:
        return self.bulletin_window if source is Source.BULLETIN else self.tweet_window


@dataclass
class RegionAnalysis:
    region: str
    series: dict[Source, dict[str, EmotionSeries]]
    adf_rows: list[AdfRow] = field(default_factory=list)
    granger: GrangerBatch = field(default_factory=GrangerBatch)


@contextmanager
def stage(name: str):
    """Re-raise library errors as AnalysisError tagged with ``name``."""
    try:
        yield
    except AnalysisError:
        raise
    except EmocoupleError as exc:
        raise AnalysisError(name, exc) from exc


def tokenize_documents(docs: Iterable[Document], cfg: PrepConfig) -> list[tuple[Document, list[str]]]:
    return [(d, preprocess(d.text, cfg)) for d in docs]


def score_documents(
    tokenized: Iterable[tuple[Document, Sequence[str]]], lex: Lexicon
) -> list[tuple[Document, CategoryScores]]:
    return [(d, score(toks, lex)) for d, toks in tokenized]


def paired_regions(docs: Iterable[Document]) -> list[str]:
    """Regions that have both bulletins and tweets."""
    seen: dict[str, set[Source]] = {}
    for d in docs:
        seen.setdefault(d.region, set()).add(d.source)
    return sorted(r for r, s in seen.items() if len(s) == 2 and r and r != UNASSIGNED)


def build_series(
    scored: Sequence[tuple[Document, CategoryScores]],
    categories: Sequence[str],
    region: str,
    source: Source,
    settings: AnalysisSettings,
) -> dict[str, EmotionSeries]:
    win = settings.window(source)
    start, end = win if win else (None, None)
    return aggregate_all(scored, categories, region, source, settings.mode,
                         settings.gap_policy, start, end)


def analyze_region(
    scored: Sequence[tuple[Document, CategoryScores]],
    categories: Sequence[str],
    region: str,
    settings: AnalysisSettings = AnalysisSettings(),
) -> RegionAnalysis:
    """Series, ADF rows and Granger results for one region.

    Errors surface as AnalysisError naming the failing stage.
    """
    with stage("aggregate"):
        bulletin = build_series(scored, categories, region, Source.BULLETIN, settings)
        tweets = build_series(scored, categories, region, Source.TWEET, settings)
    out = RegionAnalysis(region, {Source.BULLETIN: bulletin, Source.TWEET: tweets})

    # every category shares its source's date range, so one check covers all
    with stage("align"):
        if categories:
            align(bulletin[categories[0]], tweets[categories[0]])

    with stage("adf"):
        for cat in categories:
            out.adf_rows.append(adf_row(
                cat,
                adf_levels_and_difference(bulletin[cat], settings.adf_max_lag),
                adf_levels_and_difference(tweets[cat], settings.adf_max_lag),
            ))
    with stage("granger"):
        out.granger = granger_pairwise(bulletin, tweets, settings.granger_max_lag,
                                       settings.granger_lag_model)
    return out
