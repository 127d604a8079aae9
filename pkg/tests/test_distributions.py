"""Tests for the sampling primitives, judged by independent oracles.

Expected values below were computed by the quadrature / closed-form
oracles in _oracles.py (which never call the package's samplers) and
frozen as literals.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import _oracles as oracle
from mbsp import distributions as dist
from mbsp import kernels
from mbsp.errors import NumericError, ParameterError
from mbsp.rng import RngStream


def gen(seed, stream=0):
    return RngStream(seed, stream).generator


# ======================================================================
# GIG core sampler against the quadrature oracle
# ======================================================================

# (lam, chi, rho, E[X] by quadrature, E[1/X] by quadrature)
GIG_MOMENT_CASES = [
    (-2.0, 1.5, 2.0, 0.44456754270202731, 3.259423390269359),
    (-0.5, 3.0, 0.8, 1.9364916731037087, 0.84973111282770031),
    (0.5, 0.7, 1.2, 1.5970959491593109, 1.3093073414159544),
    (1.0, 2.0, 2.0, 1.8143077587637837, 0.81430775876368044),
    (3.0, 4.0, 0.5, 12.860194092601319, 0.10752426157517976),
]


@pytest.mark.parametrize("lam, chi, rho, mean_expect, recip_expect", GIG_MOMENT_CASES)
def test_gig_moments_match_quadrature(lam, chi, rho, mean_expect, recip_expect):
    n = 100000
    draws = dist.sample_gig_vector(gen(42), lam, np.full(n, chi), np.full(n, rho))
    assert np.all(draws > 0)
    assert abs(draws.mean() / mean_expect - 1.0) < 0.01
    assert abs((1.0 / draws).mean() / recip_expect - 1.0) < 0.01


def test_gig_cdf_matches_quadrature_ks():
    # one-sample KS of i.i.d. kernel draws against the quadrature CDF
    lam, chi, rho = -0.5, 3.0, 0.8
    draws = dist.sample_gig_vector(gen(11), lam, np.full(20000, chi), np.full(20000, rho))
    res = stats.ks_1samp(draws, lambda x: oracle.gig_cdf(x, lam, chi, rho))
    assert res.pvalue > 0.001


def test_gig_chi_zero_reduces_to_gamma_exactly():
    # chi = 0, lam = 2, rho = 3 must equal a Gamma(2, rate 1.5) draw
    a = dist.sample_gig(gen(5), dist.GigParams(lam=2.0, chi=0.0, rho=3.0))
    b = float(gen(5).standard_gamma(2.0) / 1.5)
    assert a == b


def test_gig_chi_zero_distribution_ks():
    draws = dist.sample_gig_vector(gen(6), 2.0, np.zeros(50000), np.full(50000, 3.0))
    res = stats.ks_1samp(draws, stats.gamma(a=2.0, scale=1.0 / 1.5).cdf)
    assert res.pvalue > 0.001


def test_gig_rho_zero_reduces_to_inverse_gamma():
    # lam = -1, rho = 0, chi = 2 is InvGamma(1, scale 1): median 1/ln 2
    draws = dist.sample_gig_vector(gen(7), -1.0, np.full(200000, 2.0), np.zeros(200000))
    assert abs(np.median(draws) - 1.4426950408889634) < 0.02
    res = stats.ks_1samp(draws[:50000], stats.invgamma(a=1.0, scale=1.0).cdf)
    assert res.pvalue > 0.001


def test_gig_symmetric_case_mean_one():
    # lam = -1/2, chi = rho = 1: Bessel symmetry makes E[X] exactly 1
    # (quadrature oracle agrees to machine precision)
    draws = dist.sample_gig_vector(gen(31), -0.5, np.ones(100000), np.ones(100000))
    assert abs(draws.mean() - 1.0) < 0.01


def test_gig_gamma_limit_mean():
    # lam = 1, chi = 0, rho = 2 is Gamma(1, rate 1): mean 1
    draws = dist.sample_gig_vector(gen(32), 1.0, np.zeros(100000), np.full(100000, 2.0))
    assert abs(draws.mean() - 1.0) < 0.02


def test_gig_reductions_two_sample_ks():
    # reduction draws against independent scipy reference samples
    ref_rng = np.random.default_rng(777)
    a = dist.sample_gig_vector(gen(33), 2.0, np.zeros(10000), np.full(10000, 3.0))
    a_ref = stats.gamma(a=2.0, scale=1.0 / 1.5).rvs(10000, random_state=ref_rng)
    assert stats.ks_2samp(a, a_ref).pvalue > 0.001
    b = dist.sample_gig_vector(gen(34), -1.0, np.full(10000, 2.0), np.zeros(10000))
    b_ref = stats.invgamma(a=1.0, scale=1.0).rvs(10000, random_state=ref_rng)
    assert stats.ks_2samp(b, b_ref).pvalue > 0.001


def test_gig_mixed_rows_dispatch_in_fixed_order():
    # interior rows and reduction rows in one call stay deterministic
    chi = np.array([1.0, 0.0, 2.0, 0.0])
    rho = np.array([1.0, 2.0, 0.5, 1.0])
    a = dist.sample_gig_vector(gen(9), 1.5, chi, rho)
    b = dist.sample_gig_vector(gen(9), 1.5, chi, rho)
    assert np.array_equal(a, b)
    assert np.all(a > 0)


def test_gig_params_validation():
    with pytest.raises(ParameterError):
        dist.GigParams(lam=1.0, chi=-0.5, rho=1.0)
    with pytest.raises(ParameterError):
        dist.GigParams(lam=1.0, chi=0.0, rho=0.0)
    with pytest.raises(ParameterError):
        dist.GigParams(lam=-1.0, chi=0.0, rho=1.0)
    with pytest.raises(ParameterError):
        dist.GigParams(lam=1.0, chi=1.0, rho=0.0)
    with pytest.raises(ParameterError):
        dist.GigParams(lam=float("nan"), chi=1.0, rho=1.0)
    with pytest.raises(ParameterError):
        dist.sample_gig_vector(gen(1), 0.0, np.array([1.0, 0.0]), np.array([1.0, 1.0]))


@settings(max_examples=25, deadline=None)
@given(
    lam=st.floats(-4.0, 4.0),
    chi=st.floats(0.05, 50.0),
    rho=st.floats(0.05, 50.0),
    seed=st.integers(0, 2**32 - 1),
)
def test_gig_draws_positive_and_finite(lam, chi, rho, seed):
    draws = dist.sample_gig_vector(gen(seed), lam, np.full(64, chi), np.full(64, rho))
    assert np.all(np.isfinite(draws))
    assert np.all(draws > 0.0)


# ======================================================================
# compiled and pure kernels are interchangeable bit for bit
# ======================================================================

def test_kernel_twins_bit_identical():
    if kernels.gig_vector_compiled is None:
        pytest.skip("compiled kernel not built on this install")
    mix = gen(3)
    chi = np.abs(mix.normal(size=5000)) + 1e-3
    rho = np.abs(mix.normal(size=5000)) + 1e-3
    for lam in (-2.5, -0.5, 0.0, 0.5, 3.0):
        g1, g2 = gen(123), gen(123)
        a = kernels.gig_vector_compiled(g1, lam, chi, rho)
        b = kernels.gig_vector_pure(g2, lam, chi, rho)
        assert np.array_equal(a, b)
        assert g1.bit_generator.state == g2.bit_generator.state


@settings(max_examples=40, deadline=None)
@given(
    lam=st.floats(-4.0, 4.0),
    chi=st.floats(1e-6, 1e4),
    rho=st.floats(1e-6, 1e4),
    seed=st.integers(0, 2**32 - 1),
)
def test_kernel_twins_bit_identical_property(lam, chi, rho, seed):
    if kernels.gig_vector_compiled is None:
        pytest.skip("compiled kernel not built on this install")
    a = kernels.gig_vector_compiled(gen(seed), lam, np.full(8, chi), np.full(8, rho))
    b = kernels.gig_vector_pure(gen(seed), lam, np.full(8, chi), np.full(8, rho))
    assert np.array_equal(a, b)


# ======================================================================
# inverse Wishart
# ======================================================================

def test_invwishart_q1_mean():
    # shape 5, scale 1: mean 1/(5-2) = 1/3
    g = gen(0)
    draws = np.array([dist.sample_inverse_wishart(g, 5.0, np.eye(1))[0, 0] for _ in range(100000)])
    assert abs(draws.mean() - 1.0 / 3.0) < 0.01


def test_invwishart_q1_matches_exact_law():
    g = gen(14)
    draws = np.array([dist.sample_inverse_wishart(g, 6.0, np.array([[2.5]]))[0, 0] for _ in range(50000)])
    res = stats.ks_1samp(draws, oracle.invwishart_q1_dist(6.0, 2.5).cdf)
    assert res.pvalue > 0.001


def test_invwishart_q2_mean():
    # shape 3, scale 2 I: mean 2 I within 0.1 entrywise at 1e5 draws
    g = gen(0)
    acc = np.zeros((2, 2))
    n = 100000
    for _ in range(n):
        acc += dist.sample_inverse_wishart(g, 3.0, 2.0 * np.eye(2))
    assert np.abs(acc / n - oracle.invwishart_mean(3.0, 2.0 * np.eye(2))).max() < 0.1


def test_invwishart_q3_mean():
    scale = np.array([[2.0, 0.3, 0.0], [0.3, 1.5, -0.2], [0.0, -0.2, 1.0]])
    g = gen(21)
    acc = np.zeros((3, 3))
    n = 60000
    for _ in range(n):
        acc += dist.sample_inverse_wishart(g, 6.0, scale)
    assert np.abs(acc / n - oracle.invwishart_mean(6.0, scale)).max() < 0.02


def test_invwishart_draws_spd_and_symmetric():
    g = gen(2)
    scale = np.array([[2.0, 0.4], [0.4, 1.0]])
    for _ in range(500):
        s = dist.sample_inverse_wishart(g, 3.0, scale)
        assert np.array_equal(s, s.T)
        assert np.linalg.eigvalsh(s).min() > 0.0


def test_invwishart_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        dist.sample_inverse_wishart(gen(1), 0.0, np.eye(2))
    with pytest.raises(ParameterError):
        dist.sample_inverse_wishart(gen(1), 3.0, np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ParameterError):
        dist.sample_inverse_wishart(gen(1), 3.0, np.ones((2, 3)))


# ======================================================================
# matrix normal
# ======================================================================

def test_matrix_normal_mean_and_kronecker_cov():
    mean = np.array([[1.0, -2.0], [0.5, 3.0]])
    row_cov = np.array([[1.0, 0.0], [0.0, 4.0]])
    col_cov = np.eye(2)
    g = gen(8)
    draws = np.stack([dist.sample_matrix_normal_naive(g, mean, row_cov, col_cov) for _ in range(100000)])
    assert np.abs(draws.mean(axis=0) - mean).max() < 0.03
    # column-major vec so the covariance is col_cov kron row_cov
    vecs = draws.transpose(0, 2, 1).reshape(draws.shape[0], -1)
    emp = np.cov(vecs, rowvar=False)
    expect = oracle.matrix_normal_vec_cov(row_cov, col_cov)
    scale = np.abs(np.diag(expect)).max()
    assert np.abs(emp - expect).max() < 0.03 * scale


def test_matrix_normal_nontrivial_covs():
    mean = np.zeros((2, 2))
    row_cov = np.array([[2.0, 0.5], [0.5, 1.0]])
    col_cov = np.array([[1.0, 0.3], [0.3, 0.5]])
    g = gen(15)
    draws = np.stack([dist.sample_matrix_normal_naive(g, mean, row_cov, col_cov) for _ in range(200000)])
    vecs = draws.transpose(0, 2, 1).reshape(draws.shape[0], -1)
    emp = np.cov(vecs, rowvar=False)
    expect = oracle.matrix_normal_vec_cov(row_cov, col_cov)
    assert np.abs(emp - expect).max() < 0.05 * np.abs(np.diag(expect)).max()


def test_matrix_normal_shape_validation():
    with pytest.raises(ParameterError):
        dist.sample_matrix_normal_naive(gen(1), np.zeros((2, 3)), np.eye(3), np.eye(3))
    with pytest.raises(ParameterError):
        dist.sample_matrix_normal_naive(gen(1), np.zeros((2, 3)), np.eye(2), np.eye(2))


# ======================================================================
# scale-mixture identity: integrating the normal against the
# inverse-gamma mixing law gives the Student-t density
# ======================================================================

def test_scale_mixture_identity_quadrature_vs_closed_form():
    s, alpha, beta = 0.8, 2.5, 1.7
    for b in np.linspace(-6.0, 6.0, 20):
        q = oracle.t_mixture_density_quad(b, s, alpha, beta)
        c = oracle.t_mixture_density_closed(b, s, alpha, beta)
        assert abs(q - c) <= 1e-6


# ======================================================================
# gamma and standard normal wrappers
# ======================================================================

def test_gamma_rate_parametrization():
    draws = dist.sample_gamma(gen(4), 3.0, 2.0, size=200000)
    assert abs(draws.mean() - 1.5) < 0.01
    assert abs(draws.var() - 0.75) < 0.02
    # shape 2, rate 4: mean 1/2
    draws = dist.sample_gamma(gen(40), 2.0, 4.0, size=100000)
    assert abs(draws.mean() - 0.5) < 0.02
    # shape 1, rate 1 is a unit exponential: P(X <= 1) = 1 - 1/e
    draws = dist.sample_gamma(gen(41), 1.0, 1.0, size=100000)
    assert abs((draws <= 1.0).mean() - 0.6321205588285577) < 0.01
    with pytest.raises(ParameterError):
        dist.sample_gamma(gen(4), -1.0, 2.0)
    with pytest.raises(ParameterError):
        dist.sample_gamma(gen(4), 1.0, 0.0)


def test_std_normal_matrix_shape_and_moments():
    z = dist.sample_std_normal_matrix(gen(12), 400, 250)
    assert z.shape == (400, 250)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1.0) < 0.01
    with pytest.raises(ParameterError):
        dist.sample_std_normal_matrix(gen(1), -1, 3)


# ======================================================================
# Cholesky guard
# ======================================================================

def test_chol_spd_plain_and_jitter():
    a = np.array([[4.0, 1.0], [1.0, 3.0]])
    l = dist.chol_spd(a)
    assert np.allclose(l @ l.T, a)
    # singular but nonnegative: jitter rescues it
    b = np.array([[1.0, 1.0], [1.0, 1.0]])
    l = dist.chol_spd(b)
    assert np.all(np.isfinite(l))
    # indefinite: jitter of 1e-10 * mean diag cannot rescue it
    c = np.array([[1.0, 0.0], [0.0, -5.0]])
    with pytest.raises(NumericError):
        dist.chol_spd(c)


def test_rng_stream_determinism_and_independence():
    a = RngStream(99, 0).generator.standard_normal(8)
    b = RngStream(99, 0).generator.standard_normal(8)
    c = RngStream(99, 1).generator.standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    s1 = RngStream(99, 0).split(4).generator.standard_normal(4)
    s2 = RngStream(99, 0).split(4).generator.standard_normal(4)
    s3 = RngStream(99, 0).split(5).generator.standard_normal(4)
    assert np.array_equal(s1, s2)
    assert not np.array_equal(s1, s3)
    with pytest.raises(ParameterError):
        RngStream(-1)
    with pytest.raises(ParameterError):
        RngStream(2**64)
