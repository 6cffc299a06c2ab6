import numpy as np

from emocouple.corpus import Source
from emocouple.pipeline import AnalysisSettings, build_series, score_documents, tokenize_documents
from emocouple.synth import FILLER, LeadLagSpec, generate_documents, signal_words
from emocouple.textprep import preprocess


def test_signal_words_are_exclusive(lex, prep):
    words = signal_words(lex, "medical_emergency", prep)
    assert words
    for w in words:
        assert lex.categories_of(w) == ("medical_emergency",)
        assert preprocess(w, prep) == [w]


def test_filler_is_neutral(lex, prep):
    for w in FILLER:
        assert preprocess(w, prep) == [w]
        assert lex.categories_of(w) == ()


def test_scores_follow_design(lex, prep):
    spec = LeadLagSpec(days=30)
    docs, design = generate_documents(5, spec, lex)
    assert sum(d.source is Source.BULLETIN for d in docs) == 30
    assert sum(d.source is Source.TWEET for d in docs) == 30 * spec.tweets_per_day
    scored = score_documents(tokenize_documents(docs, prep), lex)
    settings = AnalysisSettings(mode="pooled")
    b = build_series(scored, [spec.category], spec.region, Source.BULLETIN, settings)[spec.category]
    t = build_series(scored, [spec.category], spec.region, Source.TWEET, settings)[spec.category]
    # rounding to whole words is the only gap between design and measurement
    assert np.max(np.abs(b.values - design["bulletin"])) <= 0.5 / spec.bulletin_tokens + 1e-12
    tweet_words = spec.tweets_per_day * spec.tweet_tokens
    assert np.max(np.abs(t.values - design["tweet"])) <= 0.5 / tweet_words + 1e-12


def test_same_seed_same_corpus(lex):
    a, _ = generate_documents(3, LeadLagSpec(days=10), lex)
    b, _ = generate_documents(3, LeadLagSpec(days=10), lex)
    c, _ = generate_documents(4, LeadLagSpec(days=10), lex)
    assert a == b and a != c
