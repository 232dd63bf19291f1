import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xistrip.errors import DomainError, SingularityError
from xistrip.kernels import (
    A_REGION_MAX,
    OscParams,
    PI,
    P_fun,
    P_prime,
    J_fun,
    StripPoint,
    gamma_phase,
    g_amp,
    j_negativity_bound,
    kernel_A,
    kernel_B,
    log_g_amp,
    p_critical_points,
    p_peak_bound,
    phi,
    phi_double_prime,
    phi_prime,
    phi_series,
    radius_sq,
    theta,
    theta_prime,
)

mp.mp.dps = 40


def mp_phi(x, deriv=0):
    x = mp.mpf(x)
    return mp.nsum(lambda n: (-(n * n * mp.pi)) ** deriv * mp.exp(-n * n * mp.pi * x), [1, mp.inf])


# --- phi series ------------------------------------------------------------


def test_phi_at_one_matches_mpmath():
    assert phi(1.0) == pytest.approx(float(mp_phi(1)), rel=1e-14)
    assert phi(1.0) == pytest.approx(0.0432174, abs=1e-6)


def test_phi_prime_at_one_matches_mpmath():
    assert phi_prime(1.0) == pytest.approx(float(mp_phi(1, 1)), rel=1e-14)
    assert phi_prime(1.0) == pytest.approx(-0.1358044, abs=1e-6)


@pytest.mark.parametrize("x", [1.0, 1.3, 2.0, 7.5])
def test_phi_double_prime_matches_mpmath(x):
    assert phi_double_prime(x) == pytest.approx(float(mp_phi(x, 2)), rel=1e-14)


def test_phi_prime_negative_and_shrinking():
    xs = np.linspace(1, 20, 200)
    assert np.all(phi_prime(xs) < 0)
    assert abs(phi_prime(2.0)) < abs(phi_prime(1.0))


@pytest.mark.parametrize("deriv", [0, 1, 2])
def test_extra_terms_stay_within_tail_bound(deriv):
    res = phi_series(1.0, 1e-12, deriv)
    more = phi_series(1.0, 1e-30, deriv)
    assert more.terms > res.terms
    assert abs(more.value - res.value) <= res.tail_bound


def test_phi_rejects_small_x():
    with pytest.raises(DomainError):
        phi(0.5)


# --- kernels A and B ---------------------------------------------------------


def test_kernel_A_is_one_at_x_one():
    for a, b in [(0, 0), (3, 0.3), (9.5, -0.45)]:
        assert kernel_A(1.0, a, b) == pytest.approx(1.0, abs=1e-15)


def test_kernel_B_spot_parity_against_mpmath():
    def mp_B(x, a, b):
        x, a, b = mp.mpf(x), mp.mpf(a), mp.mpf(b)
        hl = mp.log(x) / 2
        return ((mp.mpf(1) / 2 + b) * x ** (-b / 2) - (mp.mpf(1) / 2 - b) * x ** (b / 2)) * mp.sin(a * hl) + a * (
            x ** (b / 2) - x ** (-b / 2)
        ) * mp.cos(a * hl)

    for b in (0.3, -0.3):
        assert float(kernel_B(2.0, 3.0, b)) == pytest.approx(float(mp_B(2, 3, b)), rel=1e-14)
    assert float(kernel_B(2.0, 3.0, -0.3)) == pytest.approx(-float(kernel_B(2.0, 3.0, 0.3)), rel=1e-14)


@given(
    x=st.floats(1.0, 50.0),
    a=st.floats(0.0, A_REGION_MAX),
    b=st.floats(-0.49, 0.49),
)
def test_kernel_parity(x, a, b):
    scale = 1 + a
    assert float(kernel_B(x, a, 0.0)) == 0.0
    assert float(kernel_B(x, a, -b)) == pytest.approx(-float(kernel_B(x, a, b)), rel=1e-12, abs=1e-14 * scale)
    assert float(kernel_A(x, a, -b)) == pytest.approx(float(kernel_A(x, a, b)), rel=1e-12, abs=1e-14 * scale)


def test_kernels_match_complex_factorisation():
    # with L = ln(x)/2: A = Re(u + v), B = Im(u - v),
    # u = (1/2 + b - ia) x^{-b/2} e^{iaL}, v = (1/2 - b - ia) x^{b/2} e^{iaL}
    x, a, b = 3.7, 2.1, 0.27
    rot = np.exp(0.5j * a * np.log(x))
    u = complex(0.5 + b, -a) * x ** (-b / 2) * rot
    v = complex(0.5 - b, -a) * x ** (b / 2) * rot
    assert kernel_A(x, a, b) == pytest.approx((u + v).real, rel=1e-13)
    assert kernel_B(x, a, b) == pytest.approx((u - v).imag, rel=1e-13)


# --- phase -------------------------------------------------------------------


def test_gamma_phase_anchor_values():
    p = OscParams(2.0, 0.5)
    assert gamma_phase(0.0, p) == 0.0
    assert gamma_phase(1 / p.q, p) == pytest.approx(PI / 2, abs=1e-15)
    assert gamma_phase(1e6, p) == pytest.approx(PI - math.atan(p.a / p.q), abs=1e-6)


def test_gamma_matches_unwrapped_arctangent():
    p = OscParams(1.3, 0.2)
    xs = np.linspace(1e-6, 30, 20001)
    naive = np.arctan(p.a * xs / (1 - p.q * xs))
    unwrapped = np.unwrap(naive, period=PI)
    assert np.allclose(gamma_phase(xs, p), unwrapped, atol=1e-12)


def test_theta_continuous_and_zero_at_origin():
    p = OscParams(0.7, 0.8)
    xs = np.arange(0, 12, 1e-4)
    th = theta(xs, p)
    assert th[0] == 0.0
    assert np.max(np.abs(np.diff(th))) < PI * 1e-3
    assert np.all(np.diff(th) > 0)


@settings(max_examples=60)
@given(
    a=st.floats(0.05, A_REGION_MAX),
    r=st.floats(0.01, 0.99),
    x=st.floats(0.0, 10.0),
)
def test_theta_prime_matches_finite_differences(a, r, x):
    p = OscParams(a, r)
    if abs(x - 1 / p.q) < 1e-3:
        x += 2e-3
    h = 1e-6
    fd = (theta(x + h, p) - theta(max(x - h, 0.0), p)) / (x + h - max(x - h, 0.0))
    assert float(theta_prime(x, p)) == pytest.approx(float(fd), rel=1e-6)


def test_theta_prime_exceeds_a():
    p = OscParams(2.0, 0.5)
    xs = np.arange(0, 10, 1e-3)
    assert np.all(theta_prime(xs, p) > p.a)


def test_phase_rejects_zero_a():
    with pytest.raises(DomainError):
        theta(0.5, OscParams(0.0, 0.5))


# --- amplitude and its logarithmic derivative -----------------------------------


def test_g_amp_endpoints():
    for a, r, n in [(1, 0.5, 1), (7, 0.1, 2)]:
        p = OscParams(a, r, n)
        assert g_amp(0.0, p) == pytest.approx(math.exp(-n * n * PI), rel=1e-15)
    assert g_amp(8.0, OscParams(1, 0.5)) == 0.0


def test_g_amp_matches_high_precision():
    p = OscParams(1.0, 0.5, 1)
    x = mp.mpf("0.5")
    ref = mp.exp(-mp.pi * mp.exp(2 * x) + x * mp.mpf("2.5")) * mp.sqrt((1 - x / 2) ** 2 + x**2)
    assert float(g_amp(0.5, p)) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0])
def test_log_derivative_is_J(x):
    p = OscParams(2.0, 0.5, 1)
    h = 1e-5
    fd = (log_g_amp(x + h, p) - log_g_amp(x - h, p)) / (2 * h)
    assert abs(float(fd) - float(J_fun(x, p))) < 1e-6


@settings(max_examples=50)
@given(
    a=st.floats(0.1, A_REGION_MAX),
    r=st.floats(0.01, 0.99),
    n=st.integers(1, 3),
    x=st.floats(0.01, 1.2),
)
def test_g_prime_equals_g_times_J(a, r, n, x):
    p = OscParams(a, r, n)
    h = 1e-6 * max(x, 0.1)
    g = float(g_amp(x, p))
    if g < 1e-250:
        return
    fd = (float(g_amp(x + h, p)) - float(g_amp(x - h, p))) / (2 * h)
    gj = g * float(J_fun(x, p))
    assert fd == pytest.approx(gj, rel=1e-6, abs=1e-9 * g)


def test_J_at_zero():
    for a, r in [(1, 0.5), (4, 0.2)]:
        p = OscParams(a, r)
        assert float(P_fun(0.0, p)) == pytest.approx(-(1 - r))
        assert float(J_fun(0.0, p)) == pytest.approx(-2 * PI + r + 2 - (1 - r))


def test_J_more_negative_for_larger_n():
    xs = np.linspace(0, 3, 301)
    assert np.all(J_fun(xs, OscParams(3, 0.4, 2)) < J_fun(xs, OscParams(3, 0.4, 1)))


def test_P_singular_only_when_a_zero():
    with pytest.raises(SingularityError):
        P_fun(2.0, OscParams(0.0, 0.5))
    assert math.isfinite(float(P_fun(2.0, OscParams(1e-3, 0.5))))


# --- P' roots, peak bound, majorant --------------------------------------------


def test_critical_points_anchor():
    x1, x2 = p_critical_points(OscParams(1.0, 0.5))
    assert (x1, x2) == (pytest.approx(-0.4), pytest.approx(1.2))
    x1, x2 = p_critical_points(OscParams(0.0, 0.25))
    assert x1 == x2 == pytest.approx(1 / 0.75)


@given(a=st.floats(0.01, A_REGION_MAX), r=st.floats(0.01, 0.99))
def test_P_prime_sign_pattern(a, r):
    p = OscParams(a, r)
    x1, x2 = p_critical_points(p)
    if a > p.q:
        assert x1 < 0 < x2
    w = 1e-3 * (x2 - x1)
    signs = [np.sign(float(P_prime(x, p))) for x in (x1 - w, 0.5 * (x1 + x2), x2 + w)]
    assert signs == [-1, 1, -1]


def test_P_prime_vanishes_at_roots():
    p = OscParams(2.5, 0.3)
    for x in p_critical_points(p):
        assert abs(float(P_prime(x, p))) < 1e-12


def test_peak_bound_values():
    assert p_peak_bound(OscParams(1.0, 1e-12)) == pytest.approx(1.0)
    assert p_peak_bound(OscParams(A_REGION_MAX, 1e-9)) == pytest.approx(4.8066, abs=1e-3)
    p = OscParams(2.0, 0.5)
    _, x2 = p_critical_points(p)
    assert float(P_fun(x2, p)) <= p_peak_bound(p) + 1e-14
    with pytest.raises(DomainError):
        p_peak_bound(OscParams(0.0, 0.5))


def test_P_maximum_sits_at_x2():
    p = OscParams(3.0, 0.4)
    xs = np.arange(0, 6, 1e-3)
    _, x2 = p_critical_points(p)
    i = int(np.argmax(P_fun(xs, p)))
    assert abs(xs[i] - x2) <= 1e-3


def test_majorant_negative_and_monotone_in_n():
    assert j_negativity_bound(OscParams(1.0, 0.5, 1)) < 0
    vals = [j_negativity_bound(OscParams(4.0, 0.3, n)) for n in (1, 2, 3)]
    assert vals[0] > vals[1] > vals[2]


def test_majorant_near_zero_at_region_edge():
    worst = max(j_negativity_bound(OscParams(A_REGION_MAX, r)) for r in np.linspace(0.001, 0.999, 999))
    assert abs(worst) < 0.2


def test_strip_point_validation():
    assert StripPoint(2.0, 0.25).r == 0.25
    assert StripPoint(1.0, 0.2).mirror().b == -0.2
    for a, b in [(-1, 0), (1, 0.5), (math.nan, 0)]:
        with pytest.raises(DomainError):
            StripPoint(a, b)
    with pytest.raises(DomainError):
        OscParams(1.0, 1.0)
    with pytest.raises(DomainError):
        OscParams(1.0, 0.5, 0)


def test_radius_sq_positive_for_positive_a():
    p = OscParams(0.3, 0.1)
    assert np.all(radius_sq(np.linspace(0, 10, 1001), p) > 0)
