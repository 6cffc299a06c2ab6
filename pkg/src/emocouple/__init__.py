"""Emotion time series from two text corpora and their lead-lag coupling."""

from .corpus import Document, RegionSpec, Source, filter_by_location, generate_queries, load_documents
from .econ import adf_test, granger_pairwise, granger_test
from .errors import EmocoupleError
from .lexicon import Lexicon, apply_modifications, default_lexicon, load_lexicon, score
from .series import EmotionSeries, aggregate, align, difference
from .textprep import PrepConfig, preprocess

__all__ = [
    "Document", "RegionSpec", "Source", "filter_by_location", "generate_queries", "load_documents",
    "adf_test", "granger_pairwise", "granger_test", "EmocoupleError",
    "Lexicon", "apply_modifications", "default_lexicon", "load_lexicon", "score",
    "EmotionSeries", "aggregate", "align", "difference", "PrepConfig", "preprocess",
]
__version__ = "0.1.0"
