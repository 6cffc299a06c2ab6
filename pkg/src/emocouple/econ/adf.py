"""Augmented Dickey-Fuller test without intercept or trend.

Regression: dY_t = tau*Y_{t-1} + sum_{i=1..m} a_i dY_{t-i} + u_t, with the
test statistic being the t-ratio of the Y_{t-1} coefficient.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import ConstantSeries, SingularDesign, TooShort, Underdetermined
from ..series import EmotionSeries, difference
from .ols import lag_matrix, ols
from .significance import Significance

# no-constant Dickey-Fuller critical values, used for 25 <= n <= 100
CRIT_5 = -1.951
CRIT_1 = -2.623
CLASSIFIABLE_N = (25, 100)


class Stage(str, enum.Enum):
    LEVELS = "AtLevels"
    FIRST_DIFFERENCED = "FirstDifferenced"


@dataclass(frozen=True)
class AdfResult:
    tau: float
    lag_m: int
    stage: Stage
    significance: Significance
    stationary: bool | None
    n: int
    nobs: int


def classify_tau(tau: float) -> Significance:
    if tau < CRIT_1:
        return Significance.SIG1
    if tau < CRIT_5:
        return Significance.SIG5
    return Significance.NS


def _adf_design(y: np.ndarray, m: int, start: int) -> tuple[np.ndarray, np.ndarray]:
    # rows j = start .. len(dy)-1 of dy, where dy[j] = y[j+1] - y[j]
    dy = np.diff(y)
    cols = [y[start:len(y) - 1]]
    if m:
        cols.append(lag_matrix(dy, m, start))
    return dy[start:], np.column_stack(cols)


def adf_tau(y, m: int, start: int | None = None):
    """Fit the ADF regression with ``m`` lagged differences; returns (tau, fit)."""
    y = np.asarray(y, dtype=float)
    dep, X = _adf_design(y, m, m if start is None else start)
    fit = ols(dep, X)
    return float(fit.beta[0] / fit.se[0]), fit


def adf_aic_table(y, max_lag: int) -> list[float]:
    """AIC of every m in [0, max_lag], all fitted on the sample usable by max_lag."""
    y = np.asarray(y, dtype=float)
    return [adf_tau(y, m, start=max_lag)[1].aic for m in range(max_lag + 1)]


def adf_test(
    s: EmotionSeries | np.ndarray,
    max_lag: int = 4,
    lag: int | str = "aic",
    stage: Stage = Stage.LEVELS,
) -> AdfResult:
    """Unit-root test on a series (already differenced if ``stage`` says so).

    ``lag="aic"`` picks m in [0, max_lag] by minimum AIC on a common sample
    (ties go to the smaller m), then refits on every usable observation.
    An integer ``lag`` fixes m. Sample sizes outside [25, 100] get tau but
    ``Significance.UNCLASSIFIED``: the critical values are not tabulated there.
    """
    y = np.asarray(s.values if isinstance(s, EmotionSeries) else s, dtype=float)
    n = len(y)
    if n == 0 or np.ptp(y) == 0.0:
        raise ConstantSeries(f"series of length {n} has no variability")
    if lag == "aic":
        top = max_lag
    elif isinstance(lag, (int, np.integer)) and lag >= 0:
        top = int(lag)
    else:
        raise ValueError(f"lag must be 'aic' or a non-negative int, got {lag!r}")
    if n - 1 < top + 5:
        raise TooShort(f"series of length {n} is too short for lag {top}")

    if lag == "aic":
        aics = adf_aic_table(y, top)
        m = min(range(len(aics)), key=lambda i: (aics[i], i))
    else:
        m = top
    tau, fit = adf_tau(y, m)

    if CLASSIFIABLE_N[0] <= n <= CLASSIFIABLE_N[1]:
        sig = classify_tau(tau)
        stationary = sig is not Significance.NS
    else:
        sig, stationary = Significance.UNCLASSIFIED, None
    return AdfResult(tau=tau, lag_m=m, stage=stage, significance=sig,
                     stationary=stationary, n=n, nobs=fit.n)


def adf_levels_and_difference(s: EmotionSeries, max_lag: int = 4, lag: int | str = "aic"):
    """(at-levels, first-differenced) results; ``None`` marks a non-computable
    stage (constant, too short, or degenerate regression)."""
    try:
        lev = adf_test(s, max_lag, lag, Stage.LEVELS)
    except ConstantSeries:
        return None, None
    except (TooShort, SingularDesign, Underdetermined):
        lev = None
    try:
        dif = adf_test(difference(s), max_lag, lag, Stage.FIRST_DIFFERENCED)
    except (ConstantSeries, TooShort, SingularDesign, Underdetermined):
        dif = None
    return lev, dif
