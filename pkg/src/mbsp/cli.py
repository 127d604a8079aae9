"""Command-line front end: fit, experiment, cv, summarize, bench.

Every run writes its effective configuration (with resolved defaults)
next to its outputs as run_config.json; re-running from that file
reproduces the statistical outputs bit for bit. Exit codes: 0 success,
2 input or parameter error, 3 numeric failure inside the sampler.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import __version__, bench
from .chainio import dumps_json, read_chain, read_numeric_csv, write_chain
from .errors import InputError, MbspError, NumericError, ParameterError
from .sampler import (
    Dataset,
    Hyperparameters,
    center_dataset,
    resolve_hyperparameters,
    run_chain,
)
from .simulate import ExperimentConfig, cross_validate, preset_config, run_experiment
from .summary import summarize_chain

HYPER_FIELDS = ("u", "a", "tau", "d", "k", "iterations", "burn_in", "thin", "seed")


# ======================================================================
# argument parsing
# ======================================================================

def _add_hyper_flags(p):
    p.add_argument("--seed", type=int, help="chain seed (default 0)")
    p.add_argument("--iterations", type=int, help="total Gibbs sweeps (default 15000)")
    p.add_argument("--burn-in", type=int, dest="burn_in", help="discarded sweeps (default 5000)")
    p.add_argument("--thin", type=int, help="keep every thin-th sweep (default 1)")
    p.add_argument("--tau", type=float, help="global shrinkage scale (default 1/(p sqrt(n ln n)))")
    p.add_argument("--u", type=float, help="local shape u (default 0.5)")
    p.add_argument("--a", type=float, help="mixing shape a (default 0.5)")
    p.add_argument("--d", type=float, help="error covariance shape (default 3)")
    p.add_argument("--k", type=float, help="error covariance scale (default from data)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mbsp",
        description="Sparse Bayesian multivariate regression with shrinkage priors",
    )
    parser.add_argument("--version", action="version", version=f"mbsp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a regression on X and Y CSVs")
    p_fit.add_argument("x_csv", nargs="?", help="design matrix CSV")
    p_fit.add_argument("y_csv", nargs="?", help="response matrix CSV")
    p_fit.add_argument("--config", help="JSON config to take defaults from")
    p_fit.add_argument("--level", type=float, help="credible level (default 0.95)")
    p_fit.add_argument("--no-center", action="store_true", default=None,
                       help="skip column centering of X and Y")
    p_fit.add_argument("--out", help="output directory (default mbsp_fit)")
    p_fit.add_argument("--chain-format", choices=("binary", "csv"), dest="chain_format",
                       help="chain file format (default binary)")
    p_fit.add_argument("--store-sigma", action="store_true", default=None, dest="store_sigma",
                       help="also store error covariance draws")
    _add_hyper_flags(p_fit)

    p_exp = sub.add_parser("experiment", help="run a preset synthetic benchmark")
    p_exp.add_argument("id", nargs="?", type=int, help="preset id 1..6")
    p_exp.add_argument("--config", help="JSON config to take defaults from")
    p_exp.add_argument("--replications", type=int, help="replication count (default 100)")
    p_exp.add_argument("--out", help="output directory (default mbsp_experiment)")
    _add_hyper_flags(p_exp)

    p_cv = sub.add_parser("cv", help="k-fold cross-validated prediction error")
    p_cv.add_argument("x_csv", nargs="?", help="design matrix CSV")
    p_cv.add_argument("y_csv", nargs="?", help="response matrix CSV")
    p_cv.add_argument("--config", help="JSON config to take defaults from")
    p_cv.add_argument("--folds", type=int, help="fold count (default 5)")
    p_cv.add_argument("--no-center", action="store_true", default=None,
                      help="skip per-fold column centering")
    p_cv.add_argument("--out", help="output directory (default mbsp_cv)")
    _add_hyper_flags(p_cv)

    p_sum = sub.add_parser("summarize", help="re-summarize a stored chain")
    p_sum.add_argument("chain", help="chain file written by fit")
    p_sum.add_argument("--level", type=float, help="credible level (default 0.95)")
    p_sum.add_argument("--out", help="output directory (default: chain directory)")
    p_sum.add_argument("--history-rows", dest="history_rows",
                       help="rows for the draw-history CSV: 'active' (default), 'all', or comma-separated indices")

    p_bench = sub.add_parser("bench", help="kernel and sweep benchmarks")
    p_bench.add_argument("--preset", type=int, default=5, help="preset for the sweep benchmark (default 5)")
    p_bench.add_argument("--iterations", type=int, default=200, help="sweeps to time (default 200)")
    p_bench.add_argument("--gig-draws", type=int, default=200000, dest="gig_draws",
                         help="GIG draws per kernel timing (default 200000)")
    p_bench.add_argument("--out", help="optional directory for bench.json")

    return parser


# ======================================================================
# config overlay
# ======================================================================

def _load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read config {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"config {path} is not valid JSON: {err}") from err
    if not isinstance(cfg, dict):
        raise InputError(f"config {path} must hold a JSON object")
    return cfg


def _setting(args, config, name, default):
    """CLI flag beats config file beats built-in default."""
    v = getattr(args, name, None)
    if v is not None:
        return v
    if name in config:
        return config[name]
    return default


def _hyper_from(args, config):
    cfg_hyper = config.get("hyperparameters", {})
    if not isinstance(cfg_hyper, dict):
        raise InputError("config field 'hyperparameters' must be an object")
    values = {}
    for name in HYPER_FIELDS:
        v = getattr(args, name, None)
        if v is None:
            v = cfg_hyper.get(name)
        if v is not None:
            values[name] = v
    return Hyperparameters(**values)


def _hyper_dict(hyper):
    return {name: getattr(hyper, name) for name in HYPER_FIELDS}


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _summary_json(summary, hyper_dict):
    return dumps_json(
        {
            "median": summary.b_hat,
            "ci_lower": summary.lower,
            "ci_upper": summary.upper,
            "active_rows": summary.active_rows,
            "level": summary.level,
            "hyperparameters": hyper_dict,
        }
    )


def _load_dataset(args, config):
    x_csv = args.x_csv or config.get("x_csv")
    y_csv = args.y_csv or config.get("y_csv")
    if not x_csv or not y_csv:
        raise InputError("x and y CSV paths are required (arguments or config)")
    x = read_numeric_csv(x_csv)
    y = read_numeric_csv(y_csv)
    if x.ndim != 2 or y.ndim != 2:
        raise InputError("inputs must be matrices")
    return x_csv, y_csv, Dataset(x, y)


# ======================================================================
# subcommands
# ======================================================================

def cmd_fit(args):
    config = _load_config(args.config) if args.config else {}
    x_csv, y_csv, data = _load_dataset(args, config)
    hyper = _hyper_from(args, config)
    level = float(_setting(args, config, "level", 0.95))
    center = not bool(_setting(args, config, "no_center", False))
    chain_format = _setting(args, config, "chain_format", "binary")
    store_sigma = bool(_setting(args, config, "store_sigma", False))
    out_dir = _setting(args, config, "out", "mbsp_fit")
    os.makedirs(out_dir, exist_ok=True)

    fit_data = center_dataset(data)[0] if center else data
    out = run_chain(fit_data, hyper, store_sigma=store_sigma)
    summary = summarize_chain(out, level=level)

    chain_name = "chain.mbsp" if chain_format == "binary" else "chain.csv"
    chain_path = os.path.join(out_dir, chain_name)
    write_chain(chain_path, out.b_draws, chain_format)
    if store_sigma:
        write_chain(os.path.join(out_dir, "sigma_chain.mbsp"), out.sigma_draws, "binary")

    effective = {
        "command": "fit",
        "x_csv": x_csv,
        "y_csv": y_csv,
        "no_center": not center,
        "level": level,
        "chain_format": chain_format,
        "store_sigma": store_sigma,
        "hyperparameters": _hyper_dict(out.hyper),
    }
    _write_text(os.path.join(out_dir, "summary.json"), _summary_json(summary, _hyper_dict(out.hyper)))
    _write_text(os.path.join(out_dir, "run_config.json"), dumps_json(effective))
    print(f"fit: {data.n} rows, p={data.p}, q={data.q}, "
          f"{out.b_draws.shape[0]} stored draws, {len(summary.active_rows)} active rows")
    print(f"wrote {chain_path}, summary.json, run_config.json in {out_dir}")
    return 0


def cmd_experiment(args):
    config = _load_config(args.config) if args.config else {}
    preset_id = args.id if args.id is not None else config.get("id")
    hyper = _hyper_from(args, config)
    replications = _setting(args, config, "replications", None)
    out_dir = _setting(args, config, "out", "mbsp_experiment")

    if preset_id is not None:
        exp = preset_config(int(preset_id), hyper=hyper, seed=hyper.seed)
    elif all(k in config for k in ("n", "p", "q", "n_active")):
        exp = ExperimentConfig(
            n=config["n"], p=config["p"], q=config["q"], n_active=config["n_active"],
            sigma2=config.get("sigma2", 2.0), seed=hyper.seed, hyper=hyper,
        )
    else:
        raise InputError("experiment needs a preset id or a config with n, p, q, n_active")
    if replications is not None:
        exp = replace(exp, replications=int(replications))

    result = run_experiment(exp)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "replications.csv")
    _write_text(csv_path, "\n".join(result.csv_lines()) + "\n")

    report = {
        "preset": int(preset_id) if preset_id is not None else None,
        "n": exp.n,
        "p": exp.p,
        "q": exp.q,
        "n_active": exp.n_active,
        "sigma2": exp.sigma2,
        "replications": exp.replications,
        "seed": exp.seed,
        "averages": result.averages,
    }
    _write_text(os.path.join(out_dir, "report.json"), dumps_json(report))
    effective = {
        "command": "experiment",
        "id": int(preset_id) if preset_id is not None else None,
        "n": exp.n,
        "p": exp.p,
        "q": exp.q,
        "n_active": exp.n_active,
        "sigma2": exp.sigma2,
        "replications": exp.replications,
        "out": out_dir,
        "hyperparameters": _hyper_dict(exp.hyper),
    }
    _write_text(os.path.join(out_dir, "run_config.json"), dumps_json(effective))
    avg = result.averages
    print(f"experiment n={exp.n} p={exp.p} q={exp.q} active={exp.n_active} "
          f"reps={exp.replications}")
    print(f"mse_est={avg['mse_est']:.4f} mse_pred={avg['mse_pred']:.4f} "
          f"fdr={avg['fdr']:.4f} fnr={avg['fnr']:.4f} mp={avg['mp']:.5f}")
    print(f"wrote replications.csv, report.json, run_config.json in {out_dir}")
    return 0


def cmd_cv(args):
    config = _load_config(args.config) if args.config else {}
    x_csv, y_csv, data = _load_dataset(args, config)
    hyper = _hyper_from(args, config)
    folds = int(_setting(args, config, "folds", 5))
    center = not bool(_setting(args, config, "no_center", False))
    out_dir = _setting(args, config, "out", "mbsp_cv")

    mspe, per_fold = cross_validate(data, folds, hyper, center=center, details=True)
    os.makedirs(out_dir, exist_ok=True)
    report = {
        "mspe": mspe,
        "per_fold": per_fold,
        "folds": folds,
        "no_center": not center,
        "hyperparameters": _hyper_dict(hyper),
    }
    _write_text(os.path.join(out_dir, "cv.json"), dumps_json(report))
    effective = {
        "command": "cv",
        "x_csv": x_csv,
        "y_csv": y_csv,
        "folds": folds,
        "no_center": not center,
        "out": out_dir,
        "hyperparameters": _hyper_dict(hyper),
    }
    _write_text(os.path.join(out_dir, "run_config.json"), dumps_json(effective))
    print(f"cv: {folds} folds, MSPE x 100 = {mspe:.6g}")
    print("per-fold:", " ".join(f"{v:.6g}" for v in per_fold))
    print(f"wrote cv.json, run_config.json in {out_dir}")
    return 0


def _parse_history_rows(spec_text, summary, p):
    if spec_text in (None, "active"):
        return [int(i) for i in summary.active_rows]
    if spec_text == "all":
        return list(range(p))
    try:
        rows = sorted({int(tok) for tok in spec_text.split(",") if tok.strip() != ""})
    except ValueError:
        raise InputError(
            f"--history-rows must be 'active', 'all', or comma-separated indices, got {spec_text!r}"
        ) from None
    for i in rows:
        if not 0 <= i < p:
            raise InputError(f"history row {i} out of range for p={p}")
    return rows


def cmd_summarize(args):
    draws = read_chain(args.chain)
    level = args.level if args.level is not None else 0.95
    summary = summarize_chain(draws, level=level)

    chain_dir = os.path.dirname(os.path.abspath(args.chain))
    out_dir = args.out if args.out else chain_dir
    os.makedirs(out_dir, exist_ok=True)

    # hyperparameters come from the config the fit wrote next to the chain
    hyper_dict = None
    cfg_path = os.path.join(chain_dir, "run_config.json")
    if os.path.exists(cfg_path):
        stored = _load_config(cfg_path).get("hyperparameters")
        if isinstance(stored, dict):
            hyper_dict = {name: stored.get(name) for name in HYPER_FIELDS}

    _write_text(os.path.join(out_dir, "summary.json"), _summary_json(summary, hyper_dict))

    m, p, q = draws.shape
    rows = _parse_history_rows(args.history_rows, summary, p)
    header = ["draw"] + [f"b{i}_{j}" for i in rows for j in range(q)]
    lines = [",".join(header)]
    for t in range(m):
        vals = [str(t)] + [repr(float(draws[t, i, j])) for i in rows for j in range(q)]
        lines.append(",".join(vals))
    _write_text(os.path.join(out_dir, "history.csv"), "\n".join(lines) + "\n")

    print(f"summarize: {m} draws, p={p}, q={q}, level={level}, "
          f"{len(summary.active_rows)} active rows")
    print(f"wrote summary.json and history.csv ({len(rows)} rows tracked) in {out_dir}")
    return 0


def cmd_bench(args):
    report = bench.run_bench(
        preset_id=args.preset, iterations=args.iterations, gig_draws=args.gig_draws
    )
    print(bench.format_report(report))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_text(os.path.join(args.out, "bench.json"), dumps_json(report))
        print(f"wrote bench.json in {args.out}")
    return 0


# ======================================================================
# entry point
# ======================================================================

_DISPATCH = {
    "fit": cmd_fit,
    "experiment": cmd_experiment,
    "cv": cmd_cv,
    "summarize": cmd_summarize,
    "bench": cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except NumericError as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return 3
    except MbspError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
