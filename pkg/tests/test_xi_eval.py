import math

import mpmath as mp
import numpy as np
import pytest

from xistrip.errors import DomainError
from xistrip.kernels import PI, OscParams, StripPoint, g_amp, phi_prime, theta
from xistrip.quadrature import DecayEnvelope, integrate_decaying
from xistrip.xi_eval import (
    SeriesConfig,
    boundary_term,
    default_tol,
    evaluate,
    f_prime,
    f_r,
    h_r,
    im_xi_kernel,
    im_xi_series,
    oracle_xi,
    xi_eq1,
    xi_eq6,
)

XI_HALF = 0.49712077818831410  # mpmath: xi(1/2)


def test_xi_half_reference_is_mpmath():
    mp.mp.dps = 30
    s = mp.mpf(0.5)
    assert float(s * (s - 1) / 2 * mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)) == pytest.approx(XI_HALF, rel=1e-15)


@pytest.mark.parametrize("route", ["eq1", "eq6", "oracle"])
def test_all_routes_at_origin(route):
    v = evaluate(0j, route)
    assert abs(v.re - XI_HALF) <= max(v.err_budget, 1e-12)
    assert v.re == pytest.approx(0.4971208, abs=1e-6)
    assert v.im == 0.0


@pytest.mark.parametrize("a", [0.0, 1.0, 5.0])
def test_eq1_real_on_b_zero(a):
    v = xi_eq1(complex(a, 0))
    assert abs(v.im) <= v.err_budget


def test_eq1_parity():
    up, down = xi_eq1(complex(3, 0.3)), xi_eq1(complex(3, -0.3))
    budget = up.err_budget + down.err_budget
    assert abs(up.im + down.im) <= budget
    assert abs(up.re - down.re) <= budget


def test_eq6_imag_exactly_zero_on_b_zero():
    for a in (0.5, 4.0, 9.508):
        assert xi_eq6(complex(a, 0)).im == 0.0


def test_eq6_against_eq1_and_oracle():
    t = complex(2, 0.25)
    e1, e6, orc = xi_eq1(t), xi_eq6(t), oracle_xi(t)
    assert abs(e6.value - e1.value) < 1e-8
    assert abs(e6.value - orc.value) <= e6.err_budget + orc.err_budget
    assert abs(e1.value - orc.value) <= e1.err_budget + orc.err_budget


def test_eq1_against_oracle_high_in_strip():
    t = complex(5, 0.4)
    assert abs(xi_eq1(t).value - oracle_xi(t).value) < 1e-6


def test_route_selector_rejects_unknown():
    with pytest.raises(DomainError):
        evaluate(0j, "eq9")


def test_eval_rejects_outside_strip():
    with pytest.raises(DomainError):
        xi_eq1(complex(1, 0.5))


# --- boundary term of the integration by parts ---------------------------------


def test_boundary_term_values():
    t = StripPoint(9.508, 0.45)
    assert abs(boundary_term(50.0, t)) < 1e-60
    assert boundary_term(1.0, StripPoint(3.0, 0.2)) == pytest.approx(phi_prime(1.0), rel=1e-15)
    # |cos(u + iv)| <= cosh(v) <= x^{|b|/2}: a non-oscillating envelope that must decrease
    xs = np.linspace(5, 50, 200)
    env = [abs(phi_prime(x)) * x**1.25 * x ** (abs(t.b) / 2) for x in xs]
    assert np.all(np.diff(env) < 0)
    assert all(abs(boundary_term(x, t)) <= e * (1 + 1e-12) for x, e in zip(xs, env))
    with pytest.raises(DomainError):
        boundary_term(0.5, t)


# --- f, f', h --------------------------------------------------------------------


def test_f_r_vanishes_at_a_zero():
    assert f_r(0.4, 0.0).value == 0.0


def test_f_r_forms_agree():
    tol = 1e-12
    sub = f_r(0.3, 2.0, 1, tol, "substituted")
    orig = f_r(0.3, 2.0, 1, tol, "original")
    assert abs(sub.value - orig.value) <= 2 * tol


def test_f_r_against_mpmath():
    mp.mp.dps = 30
    r, a = 0.3, 2.0
    ref = mp.quad(
        lambda x: 2 * mp.exp(-mp.pi * mp.exp(2 * x) + x * (r + 2)) * ((1 - r) * mp.sin(a * x) - a * mp.cos(a * x)),
        [0, 0.5, 1, 2, 4],
    )
    assert f_r(r, a).value == pytest.approx(float(ref), abs=1e-13)


def test_f_prime_methods_agree():
    ap = f_prime(0.5, 2.0, 1)
    fd = f_prime(0.5, 2.0, 1, method="finite-difference")
    assert abs(ap.value - fd.value) < 1e-7
    assert ap.value < 0


def test_f_prime_against_mpmath_derivative():
    mp.mp.dps = 30
    a = 2.0

    def f(r):
        return mp.quad(
            lambda x: 2 * mp.exp(-mp.pi * mp.exp(2 * x) + x * (r + 2)) * ((1 - r) * mp.sin(a * x) - a * mp.cos(a * x)),
            [0, 0.5, 1, 2, 4],
        )

    ref = mp.diff(f, mp.mpf("0.5"))
    assert f_prime(0.5, a).value == pytest.approx(float(ref), abs=1e-12)


def test_f_prime_scales_with_n():
    # mpmath (30 digits): f'(1/2) = -6.70809130783949e-3 (n = 1), -4.14326083954592e-8 (n = 2)
    f1, f2 = f_prime(0.5, 2.0, 1), f_prime(0.5, 2.0, 2)
    assert f1.value == pytest.approx(-6.70809130783949e-3, rel=1e-11)
    assert f2.value == pytest.approx(-4.14326083954592e-8, rel=1e-9)
    # e^{-3 pi} from the amplitude, a further ~1/16 from the narrower decay region
    ratio = f2.value / f1.value
    assert math.exp(-3 * PI) / 100 < ratio < math.exp(-3 * PI)


def test_f_prime_rejects_zero_a_for_phase_form():
    with pytest.raises(DomainError):
        f_prime(0.5, 0.0)
    assert math.isfinite(f_prime(0.5, 0.0, method="finite-difference").value)


def test_h_antisymmetry():
    assert h_r(0.5, 2.0).value == 0.0
    tol = 1e-12
    assert abs(h_r(0.3, 2.0, 1, tol).value + h_r(0.7, 2.0, 1, tol).value) <= 2 * tol


def test_im_series_matches_eq6_imag():
    t = complex(2, 0.25)
    series = im_xi_series(t)
    kern = im_xi_kernel(t)
    assert abs(series.value - kern.value) <= series.err_estimate + kern.err_estimate
    assert abs(series.value - xi_eq6(t).im) <= series.err_estimate + kern.err_estimate


def test_series_tail_bound_covers_extra_terms():
    t = complex(7.5, 0.4)
    cfg = SeriesConfig(3)
    short = im_xi_series(t, 1e-12, cfg)
    longer = im_xi_series(t, 1e-12, SeriesConfig(5))
    assert abs(short.value - longer.value) <= cfg.tail_bound(t.real) + short.err_estimate + longer.err_estimate


def test_default_tol_scaling():
    assert default_tol(1) == 1e-13
    assert default_tol(2) == pytest.approx(1e-13 * math.exp(-3 * PI))


def test_integrate_decaying_on_f_prime_integrand_self_consistent():
    p = OscParams(2.0, 0.5, 1)
    env = DecayEnvelope("double", p.rate, 3.0 + p.a, 2.0)
    fine = integrate_decaying(lambda x: -2 * g_amp(x, p) * np.sin(theta(x, p)), 0.0, 5e-14, env)
    coarse = f_prime(0.5, 2.0, 1, tol=1e-13)
    assert abs(fine.value - coarse.value) <= fine.err_estimate + coarse.err_estimate
