"""Gibbs sampler for the shrinkage regression model.

Model: Y = XB + E with matrix normal rows, row-wise global-local
shrinkage on B, and an inverse Wishart law on the error covariance.
The four full conditionals are derived in docs/derivations.md and each
is verified against an independent oracle in the test suite:

  B    | psi, Sigma, Y   ~  MN(A^-1 X'Y, A^-1, Sigma),  A = X'X + D^-1
  psi_i| b_i, Sigma, zeta ~  GIG(u - q/2, b_i Sigma^-1 b_i', 2 zeta_i)
  zeta_i| psi_i           ~  Gamma(a + u, rate tau + psi_i)
  Sigma| B, psi, Y        ~  IW(d + n + p, kI + (Y-XB)'(Y-XB) + B'D^-1 B)

with D = diag(psi). B uses an O(n^2 p) data-augmentation path when
p > n and the direct O(p^3) path otherwise.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .distributions import chol_spd, sample_gamma, sample_gig_vector, sample_inverse_wishart
from .errors import InputError, NumericError, ParameterError
from .rng import RngStream, _check_seed

# chi values below this in the psi conditional are clamped (lam <= 0 only)
CHI_FLOOR = 1e-30


# ======================================================================
# domain types
# ======================================================================

@dataclass
class Dataset:
    """Design matrix x (n by p) and response matrix y (n by q).

    The centered flags record whether columns have been mean-centered;
    setting a flag on uncentered data raises InputError (column means
    must vanish within 1e-8 relative tolerance).
    """

    x: np.ndarray
    y: np.ndarray
    x_centered: bool = False
    y_centered: bool = False

    def __post_init__(self):
        self.x = np.ascontiguousarray(self.x, dtype=np.float64)
        self.y = np.ascontiguousarray(self.y, dtype=np.float64)
        if self.x.ndim != 2 or self.y.ndim != 2:
            raise InputError(
                f"x and y must be matrices, got ndim {self.x.ndim} and {self.y.ndim}"
            )
        if self.x.shape[0] != self.y.shape[0]:
            raise InputError(
                f"x has {self.x.shape[0]} rows but y has {self.y.shape[0]}"
            )
        if self.x.shape[0] < 2:
            raise InputError(f"need at least 2 observations, got {self.x.shape[0]}")
        if self.x.shape[1] < 1 or self.y.shape[1] < 1:
            raise InputError("x and y must each have at least one column")
        if not np.all(np.isfinite(self.x)):
            raise InputError("x contains non-finite values")
        if not np.all(np.isfinite(self.y)):
            raise InputError("y contains non-finite values")
        if self.x_centered:
            _check_centered(self.x, "x")
        if self.y_centered:
            _check_centered(self.y, "y")

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]

    @property
    def q(self):
        return self.y.shape[1]

    @cached_property
    def xtx(self):
        return self.x.T @ self.x

    @cached_property
    def xty(self):
        return self.x.T @ self.y


def _check_centered(mat, name):
    means = mat.mean(axis=0)
    scale = np.maximum(1.0, np.abs(mat).max(axis=0))
    bad = np.abs(means) > 1e-8 * scale
    if bad.any():
        j = int(np.argmax(bad))
        raise InputError(
            f"{name} is flagged centered but column {j} has mean {means[j]:.3e}"
        )


def center_dataset(data):
    """Column-center x and y; returns (centered Dataset, x_means, y_means)."""
    x_means = data.x.mean(axis=0)
    y_means = data.y.mean(axis=0)
    centered = Dataset(
        data.x - x_means, data.y - y_means, x_centered=True, y_centered=True
    )
    return centered, x_means, y_means


@dataclass(frozen=True)
class Hyperparameters:
    """Sampler hyperparameters.

    tau and k may be left as None, in which case run_chain fills them
    from the data: tau by default_tau(n, p) and k by default_k on the
    initialization residuals. Defaults u = a = 0.5 give the
    horseshoe member of the shrinkage family.
    """

    u: float = 0.5
    a: float = 0.5
    tau: float | None = None
    d: float = 3.0
    k: float | None = None
    iterations: int = 15000
    burn_in: int = 5000
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("u", "a", "d"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v)):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.u <= 0.0:
            raise ParameterError(f"u must be positive, got {self.u}")
        if self.a <= 0.0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if self.d <= 2.0:
            raise ParameterError(f"d must exceed 2, got {self.d}")
        for name in ("tau", "k"):
            v = getattr(self, name)
            if v is None:
                continue
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        for name in ("iterations", "burn_in", "thin"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise ParameterError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.iterations < 1:
            raise ParameterError(f"iterations must be at least 1, got {self.iterations}")
        if self.burn_in < 0:
            raise ParameterError(f"burn_in must be nonnegative, got {self.burn_in}")
        if self.burn_in >= self.iterations:
            raise ParameterError(
                f"burn_in ({self.burn_in}) must be smaller than iterations ({self.iterations})"
            )
        if self.thin < 1:
            raise ParameterError(f"thin must be at least 1, got {self.thin}")
        object.__setattr__(self, "seed", _check_seed(self.seed))

    def resolved(self):
        """True when tau and k are both concrete numbers."""
        return self.tau is not None and self.k is not None


@dataclass
class GibbsState:
    """Current chain position: b (p, q), sigma (q, q), psi (p,), zeta (p,)."""

    b: np.ndarray
    sigma: np.ndarray
    psi: np.ndarray
    zeta: np.ndarray


@dataclass
class ChainDiagnostics:
    """Counters for numeric guard activations during a run."""

    chi_clamps: int = 0


@dataclass
class ChainOutput:
    """Stored draws plus the effective hyperparameters and timing.

    b_draws has shape (m, p, q) with m = (iterations - burn_in) // thin;
    sigma_draws is (m, q, q) when requested, else None.
    """

    b_draws: np.ndarray
    sigma_draws: np.ndarray | None
    hyper: Hyperparameters
    wall_time: float
    iterations_per_minute: float
    diagnostics: ChainDiagnostics = field(default_factory=ChainDiagnostics)


# ======================================================================
# defaults and initialization
# ======================================================================

def default_tau(n, p):
    """Default global shrinkage level 1 / (p sqrt(n ln n))."""
    if n < 2:
        raise ParameterError(f"default_tau needs n >= 2, got {n}")
    if p < 1:
        raise ParameterError(f"default_tau needs p >= 1, got {p}")
    return 1.0 / (p * math.sqrt(n * math.log(n)))


def default_k(data, b_init):
    """Pooled sample variance of the initialization residuals y - x b_init."""
    b_init = np.asarray(b_init, dtype=np.float64)
    if b_init.shape != (data.p, data.q):
        raise InputError(
            f"b_init shape {b_init.shape} does not conform to ({data.p}, {data.q})"
        )
    resid = data.y - data.x @ b_init
    return float(np.var(resid, ddof=1))


def _ridge_init(data):
    # unit-penalty ridge; Woodbury form keeps the solve at n x n when p > n
    x, y = data.x, data.y
    n, p = x.shape
    if p <= n:
        a = data.xtx + np.eye(p)
        return cho_solve((chol_spd(a), True), data.xty)
    g = x @ x.T + np.eye(n)
    return x.T @ cho_solve((chol_spd(g), True), y)


def initialize_state(data, hyper):
    """Deterministic starting point for the chain.

    b is the unit-ridge estimate, sigma the residual covariance plus
    1e-6 jitter, psi all ones, and zeta its prior mean a / tau. Requires
    hyper.tau to be resolved (run_chain fills it first).
    """
    if hyper.tau is None:
        raise ParameterError("initialize_state needs a resolved tau")
    with np.errstate(over="ignore", invalid="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        if float(np.var(data.y)) == 0.0:
            raise InputError("y has zero variance; nothing to fit")
        b = _ridge_init(data)
        resid = data.y - data.x @ b
        centered = resid - resid.mean(axis=0)
        sigma = centered.T @ centered / (data.n - 1) + 1e-6 * np.eye(data.q)
    if not (np.isfinite(b).all() and np.isfinite(sigma).all()):
        raise NumericError(
            "initial state is not finite; the data scale is too extreme to fit"
        )
    psi = np.ones(data.p)
    zeta = np.full(data.p, hyper.a / hyper.tau)
    return GibbsState(b=b, sigma=sigma, psi=psi, zeta=zeta)


# ======================================================================
# full-conditional updates
# ======================================================================

def update_b_naive(state, data, rng):
    """Draw B from MN(A^-1 X'Y, A^-1, Sigma), A = X'X + diag(1/psi).

    Direct O(p^3) path via Cholesky of A. Consumes one (p, q) standard
    normal block from rng.
    """
    p, q = data.p, data.q
    a = data.xtx + np.diag(1.0 / state.psi)
    la = chol_spd(a)
    mean = cho_solve((la, True), data.xty)
    lsig = chol_spd(state.sigma)
    z = rng.standard_normal((p, q))
    return mean + solve_triangular(la, z, lower=True, trans="T") @ lsig.T


def update_b_fast(state, data, rng):
    """Draw B by data augmentation in O(n^2 p), exact for any p.

    Whitens columns with the Cholesky of Sigma, draws the augmented
    pair (w, delta), solves against G = X D X' + I_n, and maps back.
    Distribution equals update_b_naive by the Woodbury identity.
    Consumes one (p, q) block then one (n, q) block from rng.
    """
    x, y = data.x, data.y
    n, p, q = data.n, data.p, data.q
    psi = state.psi
    lsig = chol_spd(state.sigma)
    y_t = solve_triangular(lsig, y.T, lower=True).T
    xd = x * psi
    g = xd @ x.T
    g[np.diag_indices_from(g)] += 1.0
    lg = chol_spd(g)
    w = np.sqrt(psi)[:, None] * rng.standard_normal((p, q))
    delta = rng.standard_normal((n, q))
    z = cho_solve((lg, True), y_t - (x @ w + delta))
    b_t = w + xd.T @ z
    return b_t @ lsig.T


def update_psi(state, hyper, rng, diagnostics=None):
    """Draw each psi_i from GIG(u - q/2, b_i Sigma^-1 b_i', 2 zeta_i).

    When u - q/2 <= 0, chi values below 1e-30 (numerically zero rows of
    B) are clamped to 1e-30 and counted on diagnostics.
    """
    q = state.sigma.shape[0]
    lam = hyper.u - 0.5 * q
    lsig = chol_spd(state.sigma)
    v = solve_triangular(lsig, state.b.T, lower=True)
    chi = np.einsum("ij,ij->j", v, v)
    if lam <= 0.0:
        low = chi < CHI_FLOOR
        if low.any():
            if diagnostics is not None:
                diagnostics.chi_clamps += int(low.sum())
            chi = np.maximum(chi, CHI_FLOOR)
    return sample_gig_vector(rng, lam, chi, 2.0 * state.zeta)


def update_zeta(state, hyper, rng):
    """Draw each zeta_i from Gamma(a + u, rate tau + psi_i)."""
    return sample_gamma(rng, hyper.a + hyper.u, hyper.tau + state.psi, size=state.psi.shape[0])


def update_sigma(state, data, hyper, rng):
    """Draw Sigma from IW(d + n + p, kI + (Y-XB)'(Y-XB) + B' diag(1/psi) B)."""
    n, p = data.x.shape
    resid = data.y - data.x @ state.b
    scale = resid.T @ resid + (state.b.T * (1.0 / state.psi)) @ state.b
    scale[np.diag_indices_from(scale)] += hyper.k
    asym = float(np.abs(scale - scale.T).max())
    if asym > 1e-8 * max(1.0, float(np.abs(scale).max())):
        raise NumericError(f"Sigma conditional scale lost symmetry (max deviation {asym:.3e})")
    scale = 0.5 * (scale + scale.T)
    return sample_inverse_wishart(rng, hyper.d + n + p, scale)


# ======================================================================
# chain driver
# ======================================================================

def resolve_hyperparameters(data, hyper):
    """Fill tau and k defaults from the data; returns (hyper, init state)."""
    tau = default_tau(data.n, data.p) if hyper.tau is None else hyper.tau
    hyper = replace(hyper, tau=tau)
    state = initialize_state(data, hyper)
    if hyper.k is None:
        k = default_k(data, state.b)
        if k <= 0.0:
            raise InputError(
                "initialization residuals have zero variance; supply k explicitly"
            )
        hyper = replace(hyper, k=k)
    return hyper, state


def run_chain(data, hyper, *, store_sigma=False, psi_update=update_psi):
    """Run the systematic-scan Gibbs chain B, psi, zeta, Sigma.

    The B step uses the O(n^2 p) path when p > n and the direct path
    otherwise. Draws with sweep index t satisfying t > burn_in and
    (t - burn_in) % thin == 0 are stored. All randomness comes from
    RngStream(hyper.seed), so equal (data, hyper) reruns are
    bit-identical. Numeric failures raise NumericError carrying the
    sweep index. psi_update may be swapped for a compatible callable to
    plug in a different local-scale law.
    """
    if not isinstance(data, Dataset):
        raise InputError(f"data must be a Dataset, got {type(data).__name__}")
    if not isinstance(hyper, Hyperparameters):
        raise ParameterError(f"hyper must be Hyperparameters, got {type(hyper).__name__}")
    hyper, state = resolve_hyperparameters(data, hyper)
    n, p, q = data.n, data.p, data.q

    rng = RngStream(hyper.seed).generator
    m = (hyper.iterations - hyper.burn_in) // hyper.thin
    b_draws = np.empty((m, p, q))
    sigma_draws = np.empty((m, q, q)) if store_sigma else None
    diagnostics = ChainDiagnostics()
    update_b = update_b_fast if p > n else update_b_naive

    kept = 0
    start = time.perf_counter()
    for sweep in range(1, hyper.iterations + 1):
        try:
            state.b = update_b(state, data, rng)
            state.psi = psi_update(state, hyper, rng, diagnostics)
            state.zeta = update_zeta(state, hyper, rng)
            state.sigma = update_sigma(state, data, hyper, rng)
        except NumericError as err:
            if err.iteration is None:
                raise NumericError(str(err), iteration=sweep) from err
            raise
        except (ValueError, np.linalg.LinAlgError) as err:
            # scipy's finiteness checks and factorizations signal a
            # diverged chain state this way
            raise NumericError(str(err), iteration=sweep) from err
        if sweep > hyper.burn_in and (sweep - hyper.burn_in) % hyper.thin == 0:
            b_draws[kept] = state.b
            if store_sigma:
                sigma_draws[kept] = state.sigma
            kept += 1
    wall = time.perf_counter() - start

    assert kept == m
    return ChainOutput(
        b_draws=b_draws,
        sigma_draws=sigma_draws,
        hyper=hyper,
        wall_time=wall,
        iterations_per_minute=hyper.iterations / wall * 60.0 if wall > 0 else float("inf"),
        diagnostics=diagnostics,
    )
