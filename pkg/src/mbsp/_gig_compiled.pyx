# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rejection sampler for the generalized inverse Gaussian law.

Twin of _gig_pure.py: identical arithmetic, identical stream consumption
(three uniforms per rejection trial) from the same BitGenerator, so a
chain is bit-identical whichever kernel is active. Any edit here must be
mirrored in the pure module.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport cosh, exp, fmin, log, log1p, sinh, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_uniform

import numpy as np


cdef inline double _psi(double x, double alpha, double lam) noexcept nogil:
    # log-density of the mode-centered log transform, maximum 0 at x = 0
    return -alpha * (cosh(x) - 1.0) - lam * (exp(x) - x - 1.0)


cdef inline double _dpsi(double x, double alpha, double lam) noexcept nogil:
    return -alpha * sinh(x) - lam * (exp(x) - 1.0)


cdef double _draw_two_param(bitgen_t *rng, double lam, double omega) noexcept nogil:
    # One draw from the two-parameter GIG(lam, omega), lam >= 0, omega > 0.
    cdef double alpha, x, t, s, eta, zeta, theta, xi
    cdef double p, r, td, sd, q, total, u, v, w, upqr, rnd, g

    # alpha = sqrt(lam^2 + omega^2) - lam, written to avoid cancellation
    alpha = omega * omega / (sqrt(lam * lam + omega * omega) + lam)

    # right touchpoint t of the envelope
    x = -_psi(1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        t = 1.0
    elif x > 2.0:
        t = sqrt(2.0 / (alpha + lam))
    else:
        t = log(4.0 / (alpha + 2.0 * lam))

    # left touchpoint s of the envelope
    x = -_psi(-1.0, alpha, lam)
    if 0.5 <= x <= 2.0:
        s = 1.0
    elif x > 2.0:
        s = sqrt(4.0 / (alpha * cosh(1.0) + lam))
    else:
        # C division gives 1 / lam = +inf at lam == 0, as in the pure twin
        s = fmin(1.0 / lam, log(1.0 + 1.0 / alpha + sqrt(1.0 / (alpha * alpha) + 2.0 / alpha)))

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
        u = random_standard_uniform(rng)
        v = random_standard_uniform(rng)
        w = random_standard_uniform(rng)
        upqr = u * total
        # -log1p(-v) is a unit exponential and stays finite for v in [0, 1)
        if upqr < q:
            rnd = -sd + q * v
        elif upqr < q + r:
            rnd = td - r * log1p(-v)
        else:
            rnd = -sd + p * log1p(-v)
        if rnd > td:
            g = exp(-eta - zeta * (rnd - t))
        elif rnd < -sd:
            g = exp(-theta + xi * (rnd + s))
        else:
            g = 1.0
        if w * g <= exp(_psi(rnd, alpha, lam)):
            break

    # mode factor (lam + sqrt(lam^2 + omega^2)) / omega without squaring omega away
    return exp(rnd) * ((alpha + 2.0 * lam) / omega)


cdef double _gig_draw(bitgen_t *rng, double lam, double chi, double rho) noexcept nogil:
    # One draw from GIG(lam, chi, rho) with chi > 0 and rho > 0.
    cdef double omega = sqrt(chi * rho)
    cdef double z
    if lam < 0.0:
        z = 1.0 / _draw_two_param(rng, -lam, omega)
    else:
        z = _draw_two_param(rng, lam, omega)
    return z * sqrt(chi / rho)


def gig_vector(object generator, double lam, chi, rho):
    """Draw one GIG(lam, chi[i], rho[i]) variate per row, in row order.

    generator is a numpy Generator; its BitGenerator is consumed through
    the C API at the exact stream positions the pure kernel consumes.
    """
    chi_arr = np.ascontiguousarray(chi, dtype=np.float64)
    rho_arr = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] chi_view = chi_arr
    cdef double[::1] rho_view = rho_arr
    cdef Py_ssize_t n = chi_view.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    bit_generator = generator.bit_generator
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(bit_generator.capsule, "BitGenerator")
    cdef Py_ssize_t i
    with bit_generator.lock:
        with nogil:
            for i in range(n):
                out[i] = _gig_draw(rng, lam, chi_view[i], rho_view[i])
    return out_arr
