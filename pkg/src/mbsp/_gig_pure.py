"""Pure-Python rejection sampler for the generalized inverse Gaussian law.

This is the fallback twin of the compiled kernel in _gig_compiled.pyx.
Both implementations run the identical arithmetic against the same
BitGenerator stream (three uniforms per rejection trial), so a chain is
bit-identical whichever kernel is active. Any edit here must be mirrored
in the .pyx file.

The target density is proportional to

    x^(lam - 1) * exp(-(rho * x + chi / x) / 2),    x > 0,

sampled through the two-parameter form (lam, omega = sqrt(chi * rho))
with Devroye's uniformly fast log-concave envelope. Callers guarantee
chi > 0, rho > 0 and omega not underflowing; the degenerate boundary
cases are dispatched to gamma reductions before reaching this module.
"""

from __future__ import annotations

import math

import numpy as np


def _psi(x, alpha, lam):
    # log-density of the mode-centered log transform, maximum 0 at x = 0
    return -alpha * (math.cosh(x) - 1.0) - lam * (math.exp(x) - x - 1.0)


def _dpsi(x, alpha, lam):
    return -alpha * math.sinh(x) - lam * (math.exp(x) - 1.0)


def _draw_two_param(u01, lam, omega):
    """One draw from the two-parameter GIG(lam, omega), lam >= 0, omega > 0.

    u01 is a callable producing one U[0, 1) variate per call; each
    rejection trial consumes exactly three of them.
    """
    # alpha = sqrt(lam^2 + omega^2) - lam, written to avoid cancellation
    alpha = omega * omega / (math.sqrt(lam * lam + omega * omega) + lam)

    # right touchpoint t of the envelope
    x = -_psi(1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        t = 1.0
    elif x > 2.0:
        t = math.sqrt(2.0 / (alpha + lam))
    else:
        t = math.log(4.0 / (alpha + 2.0 * lam))

    # left touchpoint s of the envelope
    x = -_psi(-1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        s = 1.0
    elif x > 2.0:
        s = math.sqrt(4.0 / (alpha * math.cosh(1.0) + lam))
    else:
        # 1 / lam is +inf at lam == 0, matching C division in the twin
        inv_lam = math.inf if lam == 0.0 else 1.0 / lam
        s = min(inv_lam, math.log(1.0 + 1.0 / alpha + math.sqrt(1.0 / (alpha * alpha) + 2.0 / alpha)))

    eta = -_psi(t, alpha, lam)
    zeta = -_dpsi(t, alpha, lam)
    theta = -_psi(-s, alpha, lam)
    xi = _dpsi(-s, alpha, lam)
    p = 1.0 / xi
    r = 1.0 / zeta
    td = t - r * eta
    sd = s - p * theta
    q = td + sd
    total = p + q + r

    while True:
        u = u01()
        v = u01()
        w = u01()
        upqr = u * total
        # -log1p(-v) is a unit exponential and stays finite for v in [0, 1)
        if upqr < q:
            rnd = -sd + q * v
        elif upqr < q + r:
            rnd = td - r * math.log1p(-v)
        else:
            rnd = -sd + p * math.log1p(-v)
        if rnd > td:
            g = math.exp(-eta - zeta * (rnd - t))
        elif rnd < -sd:
            g = math.exp(-theta + xi * (rnd + s))
        else:
            g = 1.0
        if w * g <= math.exp(_psi(rnd, alpha, lam)):
            break

    # mode factor (lam + sqrt(lam^2 + omega^2)) / omega without squaring omega away
    return math.exp(rnd) * ((alpha + 2.0 * lam) / omega)


def gig_draw(u01, lam, chi, rho):
    """One draw from GIG(lam, chi, rho) with chi > 0 and rho > 0."""
    omega = math.sqrt(chi * rho)
    if lam < 0.0:
        z = 1.0 / _draw_two_param(u01, -lam, omega)
    else:
        z = _draw_two_param(u01, lam, omega)
    return z * math.sqrt(chi / rho)


def gig_vector(generator, lam, chi, rho):
    """Draw one GIG(lam, chi[i], rho[i]) variate per row, in row order.

    generator is a numpy Generator; scalar generator.random() calls
    consume the exact stream positions the compiled kernel consumes.
    """
    chi = np.ascontiguousarray(chi, dtype=np.float64)
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    n = chi.shape[0]
    out = np.empty(n, dtype=np.float64)
    u01 = generator.random
    lam = float(lam)
    for i in range(n):
        out[i] = gig_draw(u01, lam, chi[i], rho[i])
    return out
