"""Shared fixtures and independent oracles.

The oracles form X'X and X'y explicitly and solve them with plain Gaussian
elimination in Python floats, so they share no code with the package's
QR-based estimator.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from emocouple.lexicon import default_lexicon, default_sentiment_lexicon
from emocouple.textprep import PrepConfig


def solve_normal_equations(X, y):
    """beta from (X'X) beta = X'y by Gauss-Jordan with partial pivoting."""
    X = [[float(v) for v in row] for row in np.atleast_2d(np.asarray(X, dtype=float))]
    y = [float(v) for v in y]
    n, k = len(X), len(X[0])
    xtx = [[math.fsum(X[r][i] * X[r][j] for r in range(n)) for j in range(k)] for i in range(k)]
    xty = [math.fsum(X[r][i] * y[r] for r in range(n)) for i in range(k)]
    aug = [xtx[i] + [xty[i]] + [1.0 if j == i else 0.0 for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        d = aug[col][col]
        aug[col] = [v / d for v in aug[col]]
        for r in range(k):
            if r != col:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    beta = [aug[i][k] for i in range(k)]
    inv = [aug[i][k + 1:] for i in range(k)]
    resid = [y[r] - math.fsum(X[r][i] * beta[i] for i in range(k)) for r in range(n)]
    rss = math.fsum(e * e for e in resid)
    return np.array(beta), rss, np.array(inv)


def oracle_adf_tau(y, m):
    """tau for dY_t = tau*Y_{t-1} + sum a_i dY_{t-i}, rows t = m+1..n-1."""
    y = np.asarray(y, dtype=float)
    dy = np.diff(y)
    rows, target = [], []
    for t in range(m + 1, len(y)):
        rows.append([y[t - 1]] + [dy[t - 1 - i] for i in range(1, m + 1)])
        target.append(dy[t - 1])
    beta, rss, inv = solve_normal_equations(rows, target)
    n, k = len(rows), len(rows[0])
    se = math.sqrt(rss / (n - k) * inv[0][0])
    return beta[0] / se


def oracle_granger_f(y, x, p):
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    ur, r, tgt = [], [], []
    for t in range(p, len(y)):
        lags_y = [y[t - i] for i in range(1, p + 1)]
        lags_x = [x[t - i] for i in range(1, p + 1)]
        ur.append([1.0] + lags_y + lags_x)
        r.append([1.0] + lags_y)
        tgt.append(y[t])
    _, rss_u, _ = solve_normal_equations(ur, tgt)
    _, rss_r, _ = solve_normal_equations(r, tgt)
    df_den = len(tgt) - 2 * p - 1
    f = math.inf if rss_u == 0.0 else ((rss_r - rss_u) / p) / (rss_u / df_den)
    return f, rss_r, rss_u


def rel_err(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


@pytest.fixture(scope="session")
def prep():
    return PrepConfig.default()


@pytest.fixture(scope="session")
def lex():
    return default_lexicon()


@pytest.fixture(scope="session")
def base_lex():
    return default_lexicon(modified=False)


@pytest.fixture(scope="session")
def slex():
    return default_sentiment_lexicon()


# --- acceptance summary --------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        if "criterion" in props:
            status = "PASS" if report.outcome == "passed" else "FAIL"
            _ACCEPTANCE[props["criterion"]] = (status, props.get("title", ""), props.get("measured", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, title, measured = _ACCEPTANCE[n]
        line = f"criterion {n}: {status}  {title}"
        terminalreporter.write_line(line + (f"  [{measured}]" if measured else ""))
