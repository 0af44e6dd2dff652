"""Multivariate nonparametric regression by iterative bias reduction.

Start from a deliberately over-smoothed base fit, then repeatedly estimate
the remaining bias by smoothing the residuals and add the estimate back.
The number of iterations is the single effective tuning knob; it is chosen
by information criteria on the smoother's eigenvalues or by
cross-validated prediction loss.
"""

from .crossval import CvPlan, make_splits, search_k_cv
from .data import Dataset, load_csv, split_response
from .engine import (
    IterationDomainError,
    KPath,
    coefficients,
    df_of_k,
    iterate_fitted,
    iterate_fitted_recursive,
    rss_of_k,
)
from .fitting import (
    IbrFit,
    KernelPredictor,
    SmootherConfig,
    TpsPredictor,
    build_smoother,
    fit,
    predict,
)
from .forward import ForwardResult, ForwardStageError, forward_select
from .kernel_smoother import (
    CalibrationError,
    KernelSmoother,
    KernelSmootherSpec,
    build_kernel_smoother,
    calibrate_bandwidth,
    calibrate_total_df,
)
from .kernels import kernel_value, kernel_values
from .model_io import LoadedModel, load_model, save_model
from .report import FitReport, format_report, make_report
from .selection import (
    BreakdownError,
    SelectionPlan,
    SelectionResult,
    criterion_value,
    search_k_exhaustive,
    search_k_numeric,
)
from .smoothers import BaseSmoother, DesignMatrix, SpectralForm
from .tps import (
    TpsSmoother,
    TpsSpec,
    build_calibrated_tps,
    build_tps_smoother,
    calibrate_tps_lambda,
    default_tps_order,
    tps_null_dim,
)

__version__ = "0.1.0"

__all__ = [
    "BaseSmoother",
    "BreakdownError",
    "CalibrationError",
    "CvPlan",
    "Dataset",
    "DesignMatrix",
    "FitReport",
    "ForwardResult",
    "ForwardStageError",
    "IbrFit",
    "IterationDomainError",
    "KPath",
    "KernelPredictor",
    "KernelSmoother",
    "KernelSmootherSpec",
    "LoadedModel",
    "SelectionPlan",
    "SelectionResult",
    "SmootherConfig",
    "SpectralForm",
    "TpsPredictor",
    "TpsSmoother",
    "TpsSpec",
    "build_calibrated_tps",
    "build_kernel_smoother",
    "build_smoother",
    "build_tps_smoother",
    "calibrate_bandwidth",
    "calibrate_total_df",
    "calibrate_tps_lambda",
    "coefficients",
    "criterion_value",
    "default_tps_order",
    "df_of_k",
    "fit",
    "forward_select",
    "format_report",
    "iterate_fitted",
    "iterate_fitted_recursive",
    "kernel_value",
    "kernel_values",
    "load_csv",
    "load_model",
    "make_report",
    "make_splits",
    "predict",
    "rss_of_k",
    "save_model",
    "search_k_cv",
    "search_k_exhaustive",
    "search_k_numeric",
    "split_response",
    "tps_null_dim",
]
