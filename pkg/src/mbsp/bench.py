"""Benchmarks: the compiled GIG kernel against its pure-Python twin,
and end-to-end Gibbs sweep throughput on a preset-sized problem."""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .rng import RngStream
from .sampler import Hyperparameters, run_chain
from .simulate import gen_synthetic, preset_config

KERNEL_CASES = ((-1.0, 1.3, 0.8), (0.5, 2.0, 1.0), (2.5, 0.3, 3.0))


def _time_kernel(fn, lam, chi, rho):
    rng = RngStream(0).generator
    start = time.perf_counter()
    fn(rng, lam, chi, rho)
    return time.perf_counter() - start


def bench_kernels(gig_draws=200000):
    """Draws per second for each kernel on identical workloads."""
    cases = []
    for lam, chi, rho in KERNEL_CASES:
        chi_v = np.full(gig_draws, chi)
        rho_v = np.full(gig_draws, rho)
        pure_t = _time_kernel(kernels.gig_vector_pure, lam, chi_v, rho_v)
        case = {
            "lam": lam,
            "chi": chi,
            "rho": rho,
            "draws": gig_draws,
            "pure_per_s": gig_draws / pure_t,
        }
        if kernels.gig_vector_compiled is not None:
            comp_t = _time_kernel(kernels.gig_vector_compiled, lam, chi_v, rho_v)
            case["compiled_per_s"] = gig_draws / comp_t
            case["speedup"] = pure_t / comp_t
        cases.append(case)
    return {
        "active_kernel": kernels.active_kernel_name(),
        "compiled_available": kernels.gig_vector_compiled is not None,
        "cases": cases,
    }


def bench_sweeps(preset_id=5, iterations=200):
    """Time run_chain on preset-sized synthetic data."""
    config = preset_config(preset_id, seed=0)
    data, _ = gen_synthetic(config, RngStream(0, 0))
    hyper = Hyperparameters(
        iterations=iterations, burn_in=max(1, iterations // 5), seed=0
    )
    out = run_chain(data, hyper)
    return {
        "preset": preset_id,
        "n": config.n,
        "p": config.p,
        "q": config.q,
        "iterations": iterations,
        "wall_time_s": out.wall_time,
        "iterations_per_minute": out.iterations_per_minute,
        "b_update_path": "fast" if config.p > config.n else "naive",
    }


def run_bench(preset_id=5, iterations=200, gig_draws=200000):
    return {
        "kernel": bench_kernels(gig_draws),
        "sweep": bench_sweeps(preset_id, iterations),
    }


def format_report(report):
    k = report["kernel"]
    lines = [f"kernel: active={k['active_kernel']} compiled_available={k['compiled_available']}"]
    for c in k["cases"]:
        line = (f"  GIG(lam={c['lam']}, chi={c['chi']}, rho={c['rho']}): "
                f"pure {c['pure_per_s']:,.0f}/s")
        if "compiled_per_s" in c:
            line += f", compiled {c['compiled_per_s']:,.0f}/s ({c['speedup']:.1f}x)"
        lines.append(line)
    s = report["sweep"]
    lines.append(
        f"sweep: preset {s['preset']} (n={s['n']}, p={s['p']}, q={s['q']}), "
        f"{s['iterations']} iterations in {s['wall_time_s']:.2f}s "
        f"= {s['iterations_per_minute']:,.0f} it/min ({s['b_update_path']} path)"
    )
    return "\n".join(lines)
