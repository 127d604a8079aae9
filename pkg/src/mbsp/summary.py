"""Posterior summaries: coefficient estimates, credible intervals, and
row-wise variable selection from stored chain draws."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError


@dataclass
class PosteriorSummary:
    """Entrywise posterior median with equal-tailed credible bounds.

    b_hat, lower, upper have shape (p, q); active has shape (p,) and
    marks rows where at least one coefficient interval excludes zero.
    """

    b_hat: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    active: np.ndarray
    level: float

    @property
    def active_rows(self):
        """Indices of the selected predictors, ascending."""
        return np.flatnonzero(self.active)


def quantile(sorted_draws, prob):
    """Type-7 quantile of pre-sorted values: linear interpolation at
    rank h = (n - 1) * prob.

    The input must be ascending; a decreasing pair raises InputError.
    """
    v = np.asarray(sorted_draws, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InputError(f"sorted_draws must be a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("sorted_draws contains non-finite values")
    if np.any(np.diff(v) < 0.0):
        raise InputError("sorted_draws is not in ascending order")
    if not (isinstance(prob, (int, float, np.floating, np.integer)) and 0.0 <= prob <= 1.0):
        raise ParameterError(f"prob must lie in [0, 1], got {prob!r}")
    h = (v.size - 1) * float(prob)
    lo = math.floor(h)
    hi = min(lo + 1, v.size - 1)
    return float(v[lo] + (h - lo) * (v[hi] - v[lo]))


def _column_quantiles(sorted_cols, prob):
    # same interpolation formula as quantile(), applied to every column
    m = sorted_cols.shape[0]
    h = (m - 1) * prob
    lo = math.floor(h)
    hi = min(lo + 1, m - 1)
    return sorted_cols[lo] + (h - lo) * (sorted_cols[hi] - sorted_cols[lo])


def summarize_chain(draws, level=0.95):
    """Summarize B draws of shape (m, p, q) into a PosteriorSummary.

    Accepts a raw draw array or any object with a b_draws attribute
    (such as ChainOutput). The point estimate is the entrywise median;
    intervals are equal-tailed at the given level; a predictor row is
    active when any of its q intervals excludes zero. Needs at least
    2 draws.
    """
    if hasattr(draws, "b_draws"):
        draws = draws.b_draws
    draws = np.asarray(draws, dtype=np.float64)
    if draws.ndim != 3:
        raise InputError(f"draws must have shape (m, p, q), got {draws.shape}")
    if draws.shape[0] < 2:
        raise InputError(f"need at least 2 draws to summarize, got {draws.shape[0]}")
    if not np.all(np.isfinite(draws)):
        raise InputError("draws contain non-finite values")
    if not (isinstance(level, (int, float, np.floating)) and 0.0 < level < 1.0):
        raise ParameterError(f"level must lie in (0, 1), got {level!r}")
    level = float(level)

    alpha = 1.0 - level
    sorted_draws = np.sort(draws, axis=0)
    b_hat = _column_quantiles(sorted_draws, 0.5)
    lower = _column_quantiles(sorted_draws, alpha / 2.0)
    upper = _column_quantiles(sorted_draws, 1.0 - alpha / 2.0)
    active = np.any((lower > 0.0) | (upper < 0.0), axis=1)
    return PosteriorSummary(b_hat=b_hat, lower=lower, upper=upper, active=active, level=level)
