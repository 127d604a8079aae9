"""Gibbs sampling for sparse Bayesian multivariate linear regression.

The model couples a matrix normal likelihood with row-wise global-local
shrinkage on the coefficient matrix and an inverse Wishart law on the
error covariance. The package exposes the sampler as a library and a
command line tool, with a compiled hot kernel and a pure-Python twin
selected at import time.
"""

from .errors import (
    ChainFormatError,
    InputError,
    MbspError,
    NumericError,
    ParameterError,
)
from .kernels import active_kernel_name
from .rng import RngStream, derive_seed
from .sampler import (
    ChainOutput,
    Dataset,
    GibbsState,
    Hyperparameters,
    center_dataset,
    default_k,
    default_tau,
    run_chain,
)
from .simulate import (
    ExperimentConfig,
    MetricsReport,
    SyntheticTruth,
    compute_metrics,
    cross_validate,
    gen_ar_covariance,
    gen_synthetic,
    preset_config,
    run_experiment,
)
from .summary import PosteriorSummary, quantile, summarize_chain

__version__ = "0.1.0"

__all__ = [
    "ChainFormatError",
    "ChainOutput",
    "Dataset",
    "ExperimentConfig",
    "GibbsState",
    "Hyperparameters",
    "InputError",
    "MbspError",
    "MetricsReport",
    "NumericError",
    "ParameterError",
    "PosteriorSummary",
    "RngStream",
    "SyntheticTruth",
    "active_kernel_name",
    "center_dataset",
    "compute_metrics",
    "cross_validate",
    "default_k",
    "default_tau",
    "derive_seed",
    "gen_ar_covariance",
    "gen_synthetic",
    "preset_config",
    "quantile",
    "run_chain",
    "run_experiment",
    "summarize_chain",
    "__version__",
]
