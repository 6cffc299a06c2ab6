"""Bivariate Granger causality via nested OLS fits and a Wald F-test.

Unrestricted:  Y_t = a0 + sum a_i Y_{t-i} + sum b_i X_{t-i} + u
Restricted:    Y_t = a0 + sum a_i Y_{t-i} + u
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from ..errors import ConstantRegressor, EconError, EmocoupleError, TooShort
from ..series import EmotionSeries, PairedSeries, align, difference
from .fdist import f_sf
from .ols import lag_matrix, ols
from .significance import Significance, from_p_value

logger = logging.getLogger(__name__)

LAG_MODELS = ("restricted", "unrestricted")


@dataclass(frozen=True)
class GrangerResult:
    variable: str
    caused: str
    causal: str
    lag_p: int
    f_value: float
    df_num: int
    df_den: int
    p_value: float
    significance: Significance
    n_obs: int = 0


@dataclass(frozen=True)
class SkippedPair:
    variable: str
    reason: str


@dataclass
class GrangerBatch:
    results: list[GrangerResult] = field(default_factory=list)
    skipped: list[SkippedPair] = field(default_factory=list)

    def __iter__(self) -> Iterator[GrangerResult]:
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)


def _design(y: np.ndarray, x: np.ndarray | None, p: int, start: int) -> tuple[np.ndarray, np.ndarray]:
    cols = [np.ones(len(y) - start), lag_matrix(y, p, start)]
    if x is not None:
        cols.append(lag_matrix(x, p, start))
    return y[start:], np.column_stack(cols)


def lag_aic_table(y, x=None, max_p: int = 4) -> list[float]:
    """AIC for p = 1..max_p, every candidate fitted on rows t >= max_p."""
    y = np.asarray(y, dtype=float)
    x = None if x is None else np.asarray(x, dtype=float)
    if max_p < 1:
        raise ValueError("max_p must be >= 1")
    k_max = max_p * (1 if x is None else 2) + 1
    if len(y) - max_p < k_max + 3:
        raise TooShort(f"{len(y)} observations are too few for max lag {max_p}")
    return [ols(*_design(y, x, p, max_p)).aic for p in range(1, max_p + 1)]


def select_lag_aic(y, x=None, max_p: int = 4) -> int:
    """Lag order in [1, max_p] with the smallest AIC; ties go to the smaller lag.

    With ``x`` the candidates are the unrestricted models, otherwise pure
    autoregressions of ``y``.
    """
    if max_p == 1:
        return 1
    aics = lag_aic_table(y, x, max_p)
    return 1 + min(range(len(aics)), key=lambda i: (aics[i], i))


def _check_not_constant(pair: PairedSeries) -> None:
    for s in (pair.y, pair.x):
        if np.ptp(s.values) == 0.0:
            raise ConstantRegressor(f"{s.label} series is constant")


def granger_test(pair: PairedSeries, lag_p: int, variable: str | None = None) -> GrangerResult:
    """Does ``pair.x`` Granger-cause ``pair.y`` at lag ``lag_p``?"""
    if lag_p < 1:
        raise ValueError("lag_p must be >= 1")
    y = np.asarray(pair.y.values, dtype=float)
    x = np.asarray(pair.x.values, dtype=float)
    n = len(y)
    _check_not_constant(pair)
    nobs = n - lag_p
    df_den = nobs - 2 * lag_p - 1
    if n < 2 * lag_p + 5 or df_den < 1:
        raise TooShort(f"{n} observations are too few for lag {lag_p}")

    dep, xu = _design(y, x, lag_p, lag_p)
    fit_u = ols(dep, xu)
    fit_r = ols(dep, xu[:, : lag_p + 1])
    gain = max(fit_r.rss - fit_u.rss, 0.0)
    if fit_u.rss == 0.0:
        if gain == 0.0:
            raise EconError("both models fit exactly; F is undefined")
        f = math.inf
    else:
        f = (gain / lag_p) / (fit_u.rss / df_den)
    p = f_sf(f, lag_p, df_den)
    return GrangerResult(
        variable=variable or pair.y.category,
        caused=pair.y.label,
        causal=pair.x.label,
        lag_p=lag_p,
        f_value=f,
        df_num=lag_p,
        df_den=df_den,
        p_value=p,
        significance=from_p_value(p),
        n_obs=nobs,
    )


def _pick_lag(y: np.ndarray, x: np.ndarray, max_p: int, lag_model: str) -> int:
    if lag_model == "restricted":
        return select_lag_aic(y, None, max_p)
    return select_lag_aic(y, x, max_p)


def granger_pairwise(
    bulletin: Mapping[str, EmotionSeries],
    tweets: Mapping[str, EmotionSeries],
    max_p: int = 4,
    lag_model: str = "restricted",
) -> GrangerBatch:
    """Test every shared category in both directions on first-differenced series.

    For each direction the lag order is chosen by minimum AIC, by default on
    the caused series' own autoregression (``lag_model="restricted"``);
    ``"unrestricted"`` selects on the full two-variable regression instead.
    Categories that cannot be tested are collected in ``skipped``.
    Output order: category name, then Bulletin-caused before Tweet-caused.
    """
    if lag_model not in LAG_MODELS:
        raise ValueError(f"lag_model must be one of {LAG_MODELS}")
    batch = GrangerBatch()
    for cat in sorted(set(bulletin) & set(tweets)):
        try:
            pair = align(difference(bulletin[cat]), difference(tweets[cat]))
            rows = []
            for y, x in ((pair.y, pair.x), (pair.x, pair.y)):
                _check_not_constant(pair)
                p = _pick_lag(y.values, x.values, max_p, lag_model)
                rows.append(granger_test(PairedSeries(y, x), p, variable=cat))
        except EmocoupleError as exc:
            logger.info("granger: skipping %s (%s)", cat, exc)
            batch.skipped.append(SkippedPair(cat, f"{type(exc).__name__}: {exc}"))
            continue
        batch.results.extend(rows)
    return batch
