import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dissipair import cl, oracle
from dissipair.ck import Environment, GaussianPacket, initial_overlap, interval_cross_overlap, interval_probability, packet_frame, wavefunction_at
from dissipair.errors import UnsupportedGeometry

A = GaussianPacket(0.0, 3.0, 1.0)
B = GaussianPacket(0.0, 3.0, 0.9)
OVERLAP = initial_overlap(A, B)

# frozen from 40-digit mpmath quadrature of the closed-form diagonals
FIG5_INTERVALS = (
    0.042545152770174620141,
    0.042210982390611238817,
    complex(0.042082851709744148787, -0.0018857673874602976155),
    complex(0.042082851709744148787, 0.0018857673874602976155),
)
FIG4_MOMENTS_T3 = (
    complex(0.99723374297180045603, 0.0),
    complex(6.7491039138491512191, 0.0),
    complex(59.695316620318386909, -0.23615649053984134881),
)
# RK4 moment-equation value of sigma_xx at t = 5 (gamma = 0.1, kBT = 5, sigma0 = 1)
SIGMA_XX_T5 = 45.52016268673029

baths = st.builds(Environment, gamma=st.floats(0.001, 0.5), kBT=st.floats(0, 20))


def test_diffusion():
    assert cl.diffusion(Environment()) == 0
    assert cl.diffusion(Environment(gamma=0.1, kBT=5)) == pytest.approx(1.0)
    assert cl.diffusion(Environment(gamma=0.2, kBT=10)) == pytest.approx(4.0)


def test_no_diffusion_reduces_to_ck():
    env = Environment(gamma=0.2)
    x = np.linspace(-5, 15, 21)
    ck = np.abs(wavefunction_at(A, x, 4.0, env)) ** 2
    assert np.allclose(cl.rho_aa_diag(A, x, 4.0, env), ck, rtol=1e-13, atol=1e-300)
    assert cl.diagonal_aa(A, 4.0, env).w_t == packet_frame(A, 4.0, env).sigma_t


def test_width_matches_moment_oracle():
    env = Environment(gamma=0.1, kBT=5)
    assert abs(cl.width_sq(A, 5.0, env) / SIGMA_XX_T5 - 1) < 1e-8
    ms = oracle.cl_moment_ode(A, 5.0, env)
    assert abs(cl.width_sq(A, 5.0, env) / ms.var_xx - 1) < 1e-8


@given(baths, st.floats(0, 10))
def test_trace_of_diagonals(env, t):
    assert abs(cl.interval_aa(A, t, env, -math.inf, math.inf) - 1) < 1e-14
    assert abs(cl.ab_gaussian(A, B, t, env).integral() - OVERLAP) < 1e-8
    assert abs(cl.cl_cross_moments(A, B, t, env).m0 - OVERLAP) < 1e-14


@given(baths, st.floats(0, 10), st.floats(0, 10))
def test_width_monotone_in_time(env, t1, t2):
    lo, hi = sorted((t1, t2))
    assert cl.width_sq(A, hi, env) >= cl.width_sq(A, lo, env) * (1 - 1e-14)


@given(st.floats(0.001, 0.5), st.floats(0, 10), st.floats(0, 20), st.floats(0, 20))
def test_width_monotone_in_temperature(g, t, k1, k2):
    lo, hi = sorted((k1, k2))
    assert cl.width_sq(A, t, Environment(gamma=g, kBT=hi)) >= cl.width_sq(A, t, Environment(gamma=g, kBT=lo))


def test_small_gamma_thermal_variance():
    g, kbt, t = 1e-4, 5.0, 3.0
    env = Environment(gamma=g, kBT=kbt)
    leading = 4 / 3 * g * kbt * t ** 3
    assert abs(cl.thermal_variance(t, env) - leading) < 2 * leading * g * t


def test_thermal_variance_series_switch_is_smooth():
    env = Environment(gamma=1.0, kBT=1.0)
    below = cl.thermal_variance(0.25 - 1e-12, env)
    above = cl.thermal_variance(0.25 + 1e-12, env)
    assert abs(above - below) / above < 1e-10


def test_cross_diagonal_at_time_zero():
    env = Environment(gamma=0.1, kBT=5)
    x = np.linspace(-4, 4, 17)
    prod = wavefunction_at(A, x, 0.0, env) * np.conj(wavefunction_at(B, x, 0.0, env))
    assert np.allclose(cl.rho_ab_diag(A, B, x, 0.0, env), prod, rtol=1e-13, atol=1e-300)


def test_cross_diagonal_frictionless_limit():
    env = Environment(gamma=1e-6)
    b = GaussianPacket(0.0, 2.5, 0.9)
    x = np.linspace(-5, 20, 26)
    prod = wavefunction_at(A, x, 3.0, env) * np.conj(wavefunction_at(b, x, 3.0, env))
    assert np.max(np.abs(cl.rho_ab_diag(A, b, x, 3.0, env) - prod)) < 1e-6


def test_cross_diagonal_needs_common_center():
    with pytest.raises(UnsupportedGeometry):
        cl.rho_ab_diag(A, GaussianPacket(1.0, 3.0, 0.9), 0.0, 1.0, Environment())


def test_intervals_full_line():
    env = Environment(gamma=0.2, kBT=10)
    got = cl.cl_interval_integrals(A, B, 4.0, env, -math.inf, math.inf)
    assert got.I_aa == pytest.approx(1, abs=1e-15) and got.I_bb == pytest.approx(1, abs=1e-15)
    assert abs(got.I_ab - OVERLAP) < 1e-13 and abs(got.I_ba - OVERLAP) < 1e-13


def test_intervals_fig5_match_quadrature():
    got = cl.cl_interval_integrals(A, B, 2.0, Environment(gamma=0.1, kBT=5), -1, 1)
    for g, ref in zip(got, FIG5_INTERVALS):
        assert abs(g - ref) < 1e-10


def test_intervals_zero_diffusion_match_ck():
    env_cl = Environment(gamma=1e-6)
    env_ck = Environment()
    got = cl.cl_interval_integrals(A, B, 2.5, env_cl, -1, 1)
    assert abs(got.I_aa - interval_probability(A, 2.5, env_ck, -1, 1)) < 1e-5
    # rho_ab = psi_a conj(psi_b), i.e. the conjugate of the CK cross overlap
    assert abs(got.I_ab - interval_cross_overlap(A, B, 2.5, env_ck, -1, 1).conjugate()) < 1e-5


def test_moments_self_at_zero():
    p = GaussianPacket(0.7, 1.0, 1.3)
    m = cl.self_moments(p, 0.0, Environment(gamma=0.1, kBT=5))
    assert m == (1.0, 0.7, pytest.approx(1.69 + 0.49))


def test_moments_fig4_match_quadrature():
    got = cl.cl_cross_moments(A, B, 3.0, Environment(gamma=0.1, kBT=5))
    for g, ref in zip(got, FIG4_MOMENTS_T3):
        assert abs(g - ref) < 1e-9


@given(baths, st.floats(0, 10))
def test_cross_moments_match_gaussian_integration(env, t):
    closed = cl.cl_cross_moments(A, B, t, env)
    direct = cl.ab_gaussian(A, B, t, env).moments()
    for u, v in zip(closed, direct):
        assert abs(u - v) < 1e-10 * max(1.0, abs(u))
