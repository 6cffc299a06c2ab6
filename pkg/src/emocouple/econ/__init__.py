from .adf import AdfResult, Stage, adf_levels_and_difference, adf_test, classify_tau
from .fdist import betainc, f_cdf, f_sf
from .granger import (
    GrangerBatch,
    GrangerResult,
    SkippedPair,
    granger_pairwise,
    granger_test,
    select_lag_aic,
)
from .ols import OlsFit, ols
from .significance import Significance, from_p_value

__all__ = [
    "AdfResult", "GrangerBatch", "GrangerResult", "OlsFit", "Significance", "SkippedPair",
    "Stage", "adf_levels_and_difference", "adf_test", "betainc", "classify_tau", "f_cdf",
    "f_sf", "from_p_value", "granger_pairwise", "granger_test", "ols", "select_lag_aic",
]
