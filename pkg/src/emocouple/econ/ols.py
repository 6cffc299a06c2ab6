from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import SingularDesign, Underdetermined


@dataclass(frozen=True, eq=False)
class OlsFit:
    beta: np.ndarray
    residuals: np.ndarray
    rss: float
    n: int
    k: int
    aic: float
    _r: np.ndarray

    @property
    def df_resid(self) -> int:
        return self.n - self.k

    @property
    def sigma2(self) -> float:
        return self.rss / self.df_resid

    @cached_property
    def xtx_inv(self) -> np.ndarray:
        # X = QR  =>  (X'X)^-1 = R^-1 R^-T
        rinv = np.linalg.inv(self._r)
        return rinv @ rinv.T

    @property
    def se(self) -> np.ndarray:
        return np.sqrt(self.sigma2 * np.diag(self.xtx_inv))

    @property
    def tvalues(self) -> np.ndarray:
        return self.beta / self.se


def aic_value(rss: float, n: int, k: int) -> float:
    """n*ln(RSS/n) + 2k; additive constants dropped."""
    if rss <= 0.0:
        return -math.inf
    return n * math.log(rss / n) + 2 * k


def ols(y, X) -> OlsFit:
    """Least squares via Householder QR. ``X`` must have full column rank."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, design has {n} rows")
    if n <= k:
        raise Underdetermined(f"{n} observations for {k} regressors")
    if np.linalg.matrix_rank(X) < k:
        raise SingularDesign(f"design matrix ({n}x{k}) is rank deficient")
    q, r = np.linalg.qr(X, mode="reduced")
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    return OlsFit(beta=beta, residuals=resid, rss=rss, n=n, k=k, aic=aic_value(rss, n, k), _r=r)


def lag_matrix(v: np.ndarray, p: int, start: int) -> np.ndarray:
    """Columns v[t-1], ..., v[t-p] for rows t = start .. len(v)-1."""
    n = len(v)
    return np.column_stack([v[start - i:n - i] for i in range(1, p + 1)])
