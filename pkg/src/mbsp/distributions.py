"""Sampling primitives shared by the Gibbs sweep.

All samplers take a numpy Generator as their first argument and document
the order in which they consume the stream, because chain reproducibility
depends on every draw landing at a fixed stream position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from . import kernels
from .errors import NumericError, ParameterError

# Below this omega = sqrt(chi * rho) the core rejection sampler operates in
# exp ranges it cannot represent; the law is then indistinguishable from its
# gamma-family limit, which is used instead.
_OMEGA_FLOOR = 1e-100


def chol_spd(a):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    On failure, adds jitter of 1e-10 times the mean diagonal once and
    retries; a second failure raises NumericError.
    """
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        pass
    bump = 1e-10 * float(np.mean(np.diagonal(a)))
    eye = np.eye(a.shape[0])
    try:
        return np.linalg.cholesky(a + bump * eye)
    except np.linalg.LinAlgError:
        raise NumericError(
            "matrix is not positive definite even after diagonal jitter"
        ) from None


@dataclass(frozen=True)
class GigParams:
    """Parameters of the generalized inverse Gaussian law.

    The density is proportional to x^(lam-1) exp(-(rho x + chi / x) / 2).
    chi and rho must be nonnegative and not both zero; chi = 0 requires
    lam > 0 (gamma reduction) and rho = 0 requires lam < 0 (inverse-gamma
    reduction).
    """

    lam: float
    chi: float
    rho: float

    def __post_init__(self):
        for name in ("lam", "chi", "rho"):
            v = getattr(self, name)
            if not isinstance(v, (int, float, np.floating, np.integer)) or not math.isfinite(v):
                raise ParameterError(f"GigParams.{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.chi < 0.0 or self.rho < 0.0:
            raise ParameterError(f"GigParams requires chi >= 0 and rho >= 0, got chi={self.chi}, rho={self.rho}")
        if self.chi == 0.0 and self.rho == 0.0:
            raise ParameterError("GigParams requires chi and rho not both zero")
        if self.chi == 0.0 and self.lam <= 0.0:
            raise ParameterError(f"GigParams with chi = 0 requires lam > 0, got lam={self.lam}")
        if self.rho == 0.0 and self.lam >= 0.0:
            raise ParameterError(f"GigParams with rho = 0 requires lam < 0, got lam={self.lam}")


def sample_gig(rng, params):
    """Draw one variate from GIG(params.lam, params.chi, params.rho).

    Boundary cases reduce exactly: chi = 0 gives Gamma(lam, rate rho/2)
    and rho = 0 gives InvGamma(-lam, scale chi/2).
    """
    if not isinstance(params, GigParams):
        params = GigParams(*params)
    return float(sample_gig_vector(rng, params.lam, [params.chi], [params.rho])[0])


def sample_gig_vector(rng, lam, chi, rho):
    """Draw one GIG(lam, chi[i], rho[i]) variate per row, in row order.

    Rows on the interior (chi > 0, rho > 0, omega above the numeric
    floor) are drawn first through the active rejection kernel in row
    order; exact gamma-family reductions fill the remaining rows after,
    so the stream consumption order is a pure function of the inputs.
    """
    lam = float(lam)
    if not math.isfinite(lam):
        raise ParameterError(f"lam must be finite, got {lam!r}")
    chi = np.ascontiguousarray(chi, dtype=np.float64)
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    if chi.ndim != 1 or rho.ndim != 1 or chi.shape != rho.shape:
        raise ParameterError("chi and rho must be one-dimensional arrays of equal length")
    if not (np.all(np.isfinite(chi)) and np.all(np.isfinite(rho))):
        raise ParameterError("chi and rho must be finite")
    if np.any(chi < 0.0) or np.any(rho < 0.0):
        raise ParameterError("chi and rho must be nonnegative")
    if np.any((chi == 0.0) & (rho == 0.0)):
        raise ParameterError("chi and rho must not both be zero in any row")
    if lam <= 0.0 and np.any(chi == 0.0):
        raise ParameterError(f"chi = 0 requires lam > 0, got lam={lam}")
    if lam >= 0.0 and np.any(rho == 0.0):
        raise ParameterError(f"rho = 0 requires lam < 0, got lam={lam}")

    core = (chi > 0.0) & (rho > 0.0) & (chi * rho >= _OMEGA_FLOOR * _OMEGA_FLOOR)
    out = np.empty(chi.shape[0], dtype=np.float64)
    if core.all():
        out[:] = kernels.gig_vector(rng, lam, chi, rho)
        return out

    if lam == 0.0 and not core.all():
        raise NumericError("GIG with lam = 0 is degenerate at the numeric floor of omega")
    out[core] = kernels.gig_vector(rng, lam, chi[core], rho[core])
    rest = ~core
    if lam > 0.0:
        out[rest] = rng.standard_gamma(lam, size=int(rest.sum())) / (0.5 * rho[rest])
    else:
        out[rest] = (0.5 * chi[rest]) / rng.standard_gamma(-lam, size=int(rest.sum()))
    return out


def sample_std_normal_matrix(rng, rows, cols):
    """Matrix of independent standard normal variates, drawn row-major."""
    if rows < 0 or cols < 0:
        raise ParameterError(f"matrix dimensions must be nonnegative, got ({rows}, {cols})")
    return rng.standard_normal((int(rows), int(cols)))


def sample_gamma(rng, shape, rate, size=None):
    """Gamma variates in the shape/rate parametrization (mean shape/rate).

    rate may be a scalar or an array broadcastable against size.
    """
    shape = float(shape)
    if not (shape > 0.0 and math.isfinite(shape)):
        raise ParameterError(f"gamma shape must be positive and finite, got {shape}")
    rate = np.asarray(rate, dtype=np.float64)
    if not (np.all(np.isfinite(rate)) and np.all(rate > 0.0)):
        raise ParameterError("gamma rate must be positive and finite")
    draws = rng.standard_gamma(shape, size=size) / rate
    return float(draws) if np.ndim(draws) == 0 else draws


def sample_inverse_wishart(rng, shape_d, scale):
    """Draw from the inverse Wishart with mean scale / (shape_d - 2).

    Parameters
    ----------
    rng : numpy.random.Generator
    shape_d : float
        Shape in the convention where the mean is scale / (shape_d - 2)
        for shape_d > 2; equals the standard degrees of freedom minus
        q - 1. Must be positive.
    scale : ndarray of shape (q, q)
        Symmetric positive definite scale matrix.

    Notes
    -----
    Uses the Bartlett factorization with triangular solves only, never a
    dense inverse. Stream order: the q chi-square diagonal variates in
    one call, then the q(q-1)/2 strictly-lower normals in one call.
    """
    shape_d = float(shape_d)
    if not (shape_d > 0.0 and math.isfinite(shape_d)):
        raise ParameterError(f"inverse Wishart shape must be positive and finite, got {shape_d}")
    scale = np.asarray(scale, dtype=np.float64)
    if scale.ndim != 2 or scale.shape[0] != scale.shape[1]:
        raise ParameterError(f"scale must be a square matrix, got shape {scale.shape}")
    if not np.allclose(scale, scale.T, rtol=0.0, atol=1e-8 * max(1.0, float(np.abs(scale).max()))):
        raise ParameterError("scale matrix must be symmetric")
    q = scale.shape[0]
    nu = shape_d + q - 1.0

    l_scale = chol_spd(scale)
    bartlett = np.zeros((q, q))
    df = nu - np.arange(q)
    np.fill_diagonal(bartlett, np.sqrt(rng.chisquare(df)))
    if q > 1:
        lower = np.tril_indices(q, k=-1)
        bartlett[lower] = rng.standard_normal(q * (q - 1) // 2)
    # Sigma = M' M with M = bartlett^-1 l_scale', so Sigma^-1 is Wishart(nu, scale^-1)
    m = solve_triangular(bartlett, l_scale.T, lower=True)
    sigma = m.T @ m
    return 0.5 * (sigma + sigma.T)


def sample_matrix_normal_naive(rng, mean, row_cov, col_cov):
    """Draw from MN(mean, row_cov, col_cov) by direct Cholesky transform.

    Consumes one row-major standard normal block of mean.shape, then
    returns mean + L_row Z L_col'. cov(vec(X)) is col_cov kron row_cov
    with column-major vec.
    """
    mean = np.asarray(mean, dtype=np.float64)
    row_cov = np.asarray(row_cov, dtype=np.float64)
    col_cov = np.asarray(col_cov, dtype=np.float64)
    if mean.ndim != 2:
        raise ParameterError(f"mean must be a matrix, got ndim={mean.ndim}")
    if row_cov.shape != (mean.shape[0], mean.shape[0]):
        raise ParameterError(f"row_cov shape {row_cov.shape} does not match mean rows {mean.shape[0]}")
    if col_cov.shape != (mean.shape[1], mean.shape[1]):
        raise ParameterError(f"col_cov shape {col_cov.shape} does not match mean columns {mean.shape[1]}")
    l_row = chol_spd(row_cov)
    l_col = chol_spd(col_cov)
    z = rng.standard_normal(mean.shape)
    return mean + l_row @ z @ l_col.T
