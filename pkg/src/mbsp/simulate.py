"""Synthetic-data experiments: data generator, selection and estimation
metrics, six preset benchmark settings, and k-fold cross-validation."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InputError, ParameterError
from .rng import RngStream, derive_seed, _check_seed
from .sampler import Dataset, Hyperparameters, center_dataset, run_chain
from .summary import summarize_chain

CSV_COLUMNS = (
    "replication",
    "mse_est",
    "mse_pred",
    "fdr",
    "fnr",
    "mp",
    "fp",
    "tp",
    "fn",
    "tn",
    "wall_time_s",
)


# ======================================================================
# configuration and results
# ======================================================================

@dataclass(frozen=True)
class ExperimentConfig:
    """One synthetic benchmark setting.

    The design has AR(0.5) column correlation, n_active uniformly
    placed nonzero rows with entries uniform on [-5,-0.5] u [0.5,5],
    and AR(0.5) noise covariance scaled by sigma2. hyper carries the
    chain controls; its seed is ignored in favor of per-replication
    seeds derived from the experiment seed.
    """

    n: int
    p: int
    q: int
    n_active: int
    sigma2: float = 2.0
    replications: int = 100
    seed: int = 0
    hyper: Hyperparameters = field(default_factory=Hyperparameters)

    def __post_init__(self):
        for name in ("n", "p", "q", "n_active", "replications"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise ParameterError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n < 2:
            raise ParameterError(f"n must be at least 2, got {self.n}")
        if self.p < 1 or self.q < 1:
            raise ParameterError("p and q must be positive")
        if not 0 <= self.n_active <= self.p:
            raise ParameterError(
                f"n_active must lie in [0, p], got {self.n_active} with p {self.p}"
            )
        if self.replications < 1:
            raise ParameterError(f"replications must be positive, got {self.replications}")
        if not (isinstance(self.sigma2, (int, float, np.floating)) and self.sigma2 > 0):
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2!r}")
        object.__setattr__(self, "sigma2", float(self.sigma2))
        object.__setattr__(self, "seed", _check_seed(self.seed))
        if not isinstance(self.hyper, Hyperparameters):
            raise ParameterError("hyper must be a Hyperparameters instance")


# the six preset settings: n, p, q, n_active
PRESETS = {
    1: (60, 30, 3, 5),
    2: (80, 60, 6, 40),
    3: (50, 200, 5, 20),
    4: (60, 100, 6, 40),
    5: (100, 500, 3, 10),
    6: (150, 1000, 4, 50),
}


def preset_config(preset_id, **overrides):
    """ExperimentConfig for preset 1..6 with optional field overrides."""
    if preset_id not in PRESETS:
        raise ParameterError(f"preset id must be 1..6, got {preset_id!r}")
    n, p, q, n_active = PRESETS[preset_id]
    return ExperimentConfig(n=n, p=p, q=q, n_active=n_active, **overrides)


@dataclass
class SyntheticTruth:
    """Ground truth behind one synthetic dataset."""

    b: np.ndarray
    active_set: np.ndarray
    sigma: np.ndarray
    gamma: np.ndarray


@dataclass
class MetricsReport:
    """Estimation and row-selection quality for one fitted replication.

    mp follows the pq-denominator convention exactly as printed; the
    row-normalized variant (fp + fn) / p is reported as mp_rows.
    """

    mse_est: float
    mse_pred: float
    fdr: float
    fnr: float
    mp: float
    mp_rows: float
    fp: int
    tp: int
    fn: int
    tn: int
    wall_time_s: float = 0.0


@dataclass
class ExperimentResult:
    """Per-replication metric reports plus their fixed-order averages."""

    config: ExperimentConfig
    reports: list
    averages: dict

    def csv_lines(self):
        """Per-replication table in the fixed CSV column order."""
        lines = [",".join(CSV_COLUMNS)]
        for i, r in enumerate(self.reports):
            vals = (
                str(i),
                repr(r.mse_est),
                repr(r.mse_pred),
                repr(r.fdr),
                repr(r.fnr),
                repr(r.mp),
                str(r.fp),
                str(r.tp),
                str(r.fn),
                str(r.tn),
                repr(r.wall_time_s),
            )
            lines.append(",".join(vals))
        return lines


# ======================================================================
# data generation
# ======================================================================

def gen_ar_covariance(dim, rho):
    """AR(1) covariance with entries rho^|i - j|."""
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ParameterError(f"dim must be a positive integer, got {dim!r}")
    if not abs(rho) < 1.0:
        raise ParameterError(f"|rho| must be below 1, got {rho!r}")
    idx = np.arange(dim)
    return float(rho) ** np.abs(idx[:, None] - idx[None, :])


def gen_synthetic(config, stream):
    """Generate one synthetic dataset; returns (Dataset, SyntheticTruth).

    Draw order (one block each, so the stream layout is stable): the
    n x p design innovations, the active row indices, the active signs,
    the active magnitudes, then the n x q noise block. X columns follow
    the AR(0.5) recursion x_1 = z_1, x_j = 0.5 x_{j-1} + sqrt(0.75) z_j,
    giving rows i.i.d. N(0, gamma) without a p x p factorization.
    """
    if not isinstance(config, ExperimentConfig):
        raise ParameterError(f"config must be an ExperimentConfig, got {type(config).__name__}")
    if not isinstance(stream, RngStream):
        raise ParameterError(f"stream must be an RngStream, got {type(stream).__name__}")
    rng = stream.generator
    n, p, q = config.n, config.p, config.q

    z = rng.standard_normal((n, p))
    x = np.empty((n, p))
    x[:, 0] = z[:, 0]
    rho, innov = 0.5, np.sqrt(0.75)
    for j in range(1, p):
        x[:, j] = rho * x[:, j - 1] + innov * z[:, j]

    b = np.zeros((p, q))
    active = np.sort(rng.choice(p, size=config.n_active, replace=False))
    if config.n_active > 0:
        signs = np.where(rng.random((config.n_active, q)) < 0.5, -1.0, 1.0)
        magnitudes = rng.uniform(0.5, 5.0, size=(config.n_active, q))
        b[active] = signs * magnitudes

    sigma = config.sigma2 * gen_ar_covariance(q, 0.5)
    noise = rng.standard_normal((n, q)) @ np.linalg.cholesky(sigma).T
    y = x @ b + noise

    truth = SyntheticTruth(b=b, active_set=active, sigma=sigma, gamma=gen_ar_covariance(p, 0.5))
    return Dataset(x, y), truth


# ======================================================================
# metrics
# ======================================================================

def compute_metrics(b_hat, summary, truth, data):
    """Score one fit against the truth; row-level confusion counts."""
    p, q = truth.b.shape
    if b_hat.shape != (p, q):
        raise InputError(f"b_hat shape {b_hat.shape} does not conform to ({p}, {q})")
    n = data.x.shape[0]

    mse_est = 100.0 * float(np.sum((b_hat - truth.b) ** 2)) / (p * q)
    mse_pred = 100.0 * float(np.sum((data.x @ (b_hat - truth.b)) ** 2)) / (n * q)

    truth_mask = np.zeros(p, dtype=bool)
    truth_mask[truth.active_set] = True
    selected = summary.active
    tp = int(np.sum(selected & truth_mask))
    fp = int(np.sum(selected & ~truth_mask))
    fn = int(np.sum(~selected & truth_mask))
    tn = int(np.sum(~selected & ~truth_mask))

    fdr = fp / (tp + fp) if (tp + fp) > 0 else 0.0
    fnr = fn / (tn + fn) if (tn + fn) > 0 else 0.0
    mp = (fp + fn) / (p * q)
    return MetricsReport(
        mse_est=mse_est,
        mse_pred=mse_pred,
        fdr=fdr,
        fnr=fnr,
        mp=mp,
        mp_rows=(fp + fn) / p,
        fp=fp,
        tp=tp,
        fn=fn,
        tn=tn,
    )


# ======================================================================
# experiment driver
# ======================================================================

def _worker_count():
    raw = os.environ.get("MBSP_THREADS", "1")
    try:
        k = int(raw)
    except ValueError as err:
        raise ParameterError(f"MBSP_THREADS must be an integer, got {raw!r}") from err
    return max(1, k)


def _run_replication(config, rep):
    """Generate, fit, summarize, and score replication rep."""
    data, truth = gen_synthetic(config, RngStream(config.seed, rep))
    hyper = replace(config.hyper, seed=derive_seed(config.seed, rep, 1))
    start = time.perf_counter()
    out = run_chain(data, hyper)
    summary = summarize_chain(out)
    report = compute_metrics(summary.b_hat, summary, truth, data)
    report.wall_time_s = time.perf_counter() - start
    return report


def run_experiment(config, replications=None):
    """Run a preset id (1..6) or an ExperimentConfig; average the metrics.

    Replications run on distinct RNG stream-ids, in parallel across
    MBSP_THREADS processes when that exceeds 1; results are aggregated
    in replication order either way, so the output is identical.
    """
    if isinstance(config, (int, np.integer)) and not isinstance(config, bool):
        config = preset_config(int(config))
    if not isinstance(config, ExperimentConfig):
        raise ParameterError(f"config must be a preset id or ExperimentConfig, got {config!r}")
    if replications is not None:
        config = replace(config, replications=int(replications))

    reps = config.replications
    workers = _worker_count()
    if workers > 1 and reps > 1:
        with ProcessPoolExecutor(max_workers=min(workers, reps)) as pool:
            reports = list(pool.map(_run_replication, [config] * reps, range(reps)))
    else:
        reports = [_run_replication(config, rep) for rep in range(reps)]

    # wall_time_s stays out: averages must be identical across reruns
    averages = {}
    for name in ("mse_est", "mse_pred", "fdr", "fnr", "mp", "mp_rows", "fp", "tp", "fn", "tn"):
        averages[name] = float(np.mean([getattr(r, name) for r in reports]))
    return ExperimentResult(config=config, reports=reports, averages=averages)


# ======================================================================
# cross-validation
# ======================================================================

def cross_validate(data, folds, hyper, *, center=True, details=False):
    """k-fold cross-validated mean squared prediction error, times 100.

    Rows are shuffled by a dedicated substream of hyper.seed and split
    into contiguous blocks. Each fold fits on the remaining rows
    (centered by training-fold means when center is True), predicts the
    held-out rows with the posterior-median coefficients, and scores
    the mean squared residual. Returns the scalar 100 x fold average;
    with details=True returns (mspe, per_fold) where per_fold values
    are already scaled by 100 and average exactly to mspe.
    """
    if not isinstance(data, Dataset):
        raise InputError(f"data must be a Dataset, got {type(data).__name__}")
    if not isinstance(hyper, Hyperparameters):
        raise ParameterError(f"hyper must be Hyperparameters, got {type(hyper).__name__}")
    if not isinstance(folds, (int, np.integer)) or isinstance(folds, bool):
        raise ParameterError(f"folds must be an integer, got {folds!r}")
    n = data.n
    if folds < 2:
        raise ParameterError(f"folds must be at least 2, got {folds}")
    if folds > n:
        raise InputError(f"cannot make {folds} folds from {n} rows")

    shuffle_rng = RngStream(hyper.seed, 0).split(1).generator
    order = shuffle_rng.permutation(n)
    blocks = np.array_split(order, folds)

    per_fold = np.empty(folds)
    for i, test_idx in enumerate(blocks):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        x_tr, y_tr = data.x[train_mask], data.y[train_mask]
        x_te, y_te = data.x[test_idx], data.y[test_idx]
        if center:
            fit_data, x_means, y_means = center_dataset(Dataset(x_tr, y_tr))
        else:
            fit_data = Dataset(x_tr, y_tr)
            x_means = np.zeros(data.p)
            y_means = np.zeros(data.q)
        fold_hyper = replace(hyper, seed=derive_seed(hyper.seed, 2, i))
        out = run_chain(fit_data, fold_hyper)
        b_hat = summarize_chain(out).b_hat
        pred = (x_te - x_means) @ b_hat + y_means
        per_fold[i] = 100.0 * float(np.mean((y_te - pred) ** 2))

    mspe = float(np.mean(per_fold))
    if details:
        return mspe, per_fold
    return mspe
