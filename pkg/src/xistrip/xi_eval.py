"""Xi(t) by Riemann's integral, by the per-n kernel series, and by the oracle.

The imaginary part of the kernel series is also exposed term by term through
``f_r``, ``h_r`` and ``f_prime``, which is where the monotonicity argument
lives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernels import (
    PI,
    OscParams,
    StripPoint,
    g_amp,
    kernel_A,
    kernel_B,
    phi_series,
    theta,
)
from .oracle import oracle_estimate
from .quadrature import DecayEnvelope, QuadResult, integrate_decaying

ROUTES = ("eq1", "eq6", "oracle")

#: absolute tolerance for n = 1 quantities; scaled by exp(-(n^2 - 1) pi) for larger n
BASE_TOL = 1e-13
SERIES_PHI_TOL = 1e-18


def default_tol(n: int = 1, base: float = BASE_TOL) -> float:
    return base * math.exp(-(n * n - 1) * PI)


@dataclass(frozen=True)
class XiValue:
    re: float
    im: float
    route: str
    err_budget: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def to_dict(self) -> dict:
        return {"route": self.route, "re": self.re, "im": self.im, "err_budget": self.err_budget}


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation order of the n-series with an analytic bound on the dropped terms."""

    terms: int = 8

    def __post_init__(self):
        if self.terms < 1:
            raise DomainError(f"need at least one series term, got {self.terms}")

    @staticmethod
    def _term_bound(n: int, a: float) -> float:
        lam = n * n * PI
        integral = (1.0 + 2.0 * a) * math.exp(-lam) / (lam - 0.5) + 4.0 * math.exp(-lam)
        return lam * integral

    def tail_bound(self, a: float) -> float:
        first = self._term_bound(self.terms + 1, a)
        ratio = self._term_bound(self.terms + 2, a) / first
        return first / (1.0 - ratio)


def _as_point(t) -> StripPoint:
    if isinstance(t, StripPoint):
        return t
    t = complex(t)
    return StripPoint(t.real, t.imag)


def _xi_route_result(re: QuadResult, im: QuadResult, route: str, extra: float) -> XiValue:
    return XiValue(re.value, im.value, route, re.err_estimate + im.err_estimate + extra)


# ---------------------------------------------------------------------------
# Riemann's integral: 4 int_1^inf (x^{3/2} phi')' x^{-1/4} cos(t log(x)/2) dx


def _eq1_weight(x):
    d1 = phi_series(x, SERIES_PHI_TOL, 1).value
    d2 = phi_series(x, SERIES_PHI_TOL, 2).value
    return 4.0 * (1.5 * x**0.25 * d1 + x**1.25 * d2)


def xi_eq1(t, tol: float = 1e-12) -> XiValue:
    pt = _as_point(t)
    a, b = pt.a, pt.b

    def re_part(x):
        half_log = 0.5 * np.log(x)
        return _eq1_weight(x) * np.cos(a * half_log) * np.cosh(b * half_log)

    def im_part(x):
        half_log = 0.5 * np.log(x)
        return -_eq1_weight(x) * np.sin(a * half_log) * np.sinh(b * half_log)

    # higher n inflate phi', phi'' by at most 0.2% on x >= 1
    env = DecayEnvelope("single", PI, 1.25 + abs(b) / 2.0, 4.008 * (1.5 * PI + PI * PI), start=1.0)
    re = integrate_decaying(re_part, 1.0, tol / 2.0, env)
    im = integrate_decaying(im_part, 1.0, tol / 2.0, env)
    trunc = phi_series(1.0, SERIES_PHI_TOL, 1).tail_bound + phi_series(1.0, SERIES_PHI_TOL, 2).tail_bound
    return _xi_route_result(re, im, "eq1", 20.0 * trunc)


def boundary_term(x: float, t) -> complex:
    """Integrated-by-parts boundary expression ``x^{5/4} phi'(x) cos(t log(x)/2)``."""
    if x < 1:
        raise DomainError(f"boundary term is defined for x >= 1, got {x}")
    pt = _as_point(t)
    d1 = phi_series(x, 1e-17 * PI * math.exp(-PI * x), 1).value
    return x**1.25 * d1 * cmath.cos(0.5 * pt.t * math.log(x))


# ---------------------------------------------------------------------------
# kernel series: sum_n (-n^2 pi) int_1^inf e^{-n^2 pi x} (x^{1/4} A - 4 n^2 pi + i x^{1/4} B) dx


def _term_tol(tol: float, n: int) -> float:
    # weighted by n^2 pi these sum to < tol; relative accuracy is the same for every n
    return 0.5 * tol * math.exp(-(n * n - 1) * PI) / PI


def _eq6_real_term(n: int, a: float, b: float, tol: float) -> QuadResult:
    lam = n * n * PI

    def integrand(x):
        return np.exp(-lam * x) * (x**0.25 * kernel_A(x, a, b) - 4.0 * lam)

    env = DecayEnvelope("single", lam, 0.5, 1.0 + 2.0 * a + 4.0 * lam, start=1.0)
    return integrate_decaying(integrand, 1.0, tol, env)


def _eq6_imag_term(n: int, a: float, b: float, tol: float) -> QuadResult:
    lam = n * n * PI
    if b == 0.0:
        return QuadResult(0.0, 0.0, 1.0, 0)

    def integrand(x):
        return np.exp(-lam * x) * x**0.25 * kernel_B(x, a, b)

    env = DecayEnvelope("single", lam, 0.5, 1.0 + a, start=1.0)
    return integrate_decaying(integrand, 1.0, tol, env)


def im_xi_kernel(t, tol: float = 1e-12, cfg: SeriesConfig = SeriesConfig()) -> QuadResult:
    """Imaginary part of the kernel series alone (the scans only need this)."""
    pt = _as_point(t)
    total = QuadResult(0.0, 0.0, 1.0, 0)
    for n in range(1, cfg.terms + 1):
        term = _eq6_imag_term(n, pt.a, pt.b, _term_tol(tol, n))
        total = total + term.scaled(-n * n * PI)
    return total + QuadResult(0.0, cfg.tail_bound(pt.a), 1.0, 0)


def xi_eq6(t, tol: float = 1e-12, cfg: SeriesConfig = SeriesConfig()) -> XiValue:
    pt = _as_point(t)
    re = QuadResult(0.0, 0.0, 1.0, 0)
    im = QuadResult(0.0, 0.0, 1.0, 0)
    for n in range(1, cfg.terms + 1):
        weight = -n * n * PI
        tol_n = _term_tol(tol, n)
        re = re + _eq6_real_term(n, pt.a, pt.b, tol_n).scaled(weight)
        im = im + _eq6_imag_term(n, pt.a, pt.b, tol_n).scaled(weight)
    return _xi_route_result(re, im, "eq6", cfg.tail_bound(pt.a))


def oracle_xi(t) -> XiValue:
    pt = _as_point(t)
    value, err = oracle_estimate(pt.a, pt.b)
    return XiValue(value.real, value.imag, "oracle", err)


def evaluate(t, route: str, tol: float = 1e-12, cfg: SeriesConfig = SeriesConfig()) -> XiValue:
    if route == "eq1":
        return xi_eq1(t, tol)
    if route == "eq6":
        return xi_eq6(t, tol, cfg)
    if route == "oracle":
        return oracle_xi(t)
    raise DomainError(f"unknown route {route!r}; expected one of {ROUTES}")


# ---------------------------------------------------------------------------
# one term of the imaginary part: h(r) = f(r) - f(1 - r)


def _check_r(r: float):
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")


def f_r(r: float, a: float, n: int = 1, tol: float | None = None, form: str = "substituted") -> QuadResult:
    """``f(r)`` over ``[1, inf)`` (``form="original"``) or after ``x -> exp(2x)``."""
    _check_r(r)
    tol = default_tol(n) if tol is None else tol
    lam = n * n * PI
    q = 1.0 - r
    if form == "substituted":
        def integrand(x):
            return 2.0 * np.exp(-lam * np.exp(2.0 * x) + x * (r + 2.0)) * (
                q * np.sin(a * x) - a * np.cos(a * x)
            )

        env = DecayEnvelope("double", lam, r + 2.0, 2.0 * (q + a) or 1.0, start=0.0)
        return integrate_decaying(integrand, 0.0, tol, env)
    if form == "original":
        def integrand(x):
            half_log = 0.5 * np.log(x)
            return np.exp(-lam * x) * x ** (0.5 * r) * (
                q * np.sin(a * half_log) - a * np.cos(a * half_log)
            )

        env = DecayEnvelope("single", lam, 0.5 * r, (q + a) or 1.0, start=1.0)
        return integrate_decaying(integrand, 1.0, tol, env)
    raise DomainError(f"unknown form {form!r}")


def _fd_step(r: float, step: float) -> float:
    return min(step, 0.5 * r, 0.5 * (1.0 - r))


def f_prime(
    r: float,
    a: float,
    n: int = 1,
    tol: float | None = None,
    method: str = "amplitude-phase",
    step: float = 1e-3,
) -> QuadResult:
    """``f'(r)`` as ``-2 int g sin(theta)``, or by Richardson-extrapolated central differences."""
    _check_r(r)
    tol = default_tol(n) if tol is None else tol
    if method == "amplitude-phase":
        p = OscParams(a, r, n)
        if a <= 0:
            raise DomainError("the amplitude-phase form needs a > 0")

        def integrand(x):
            return -2.0 * g_amp(x, p) * np.sin(theta(x, p))

        # R(x) <= 1 + (1 - r + a) x <= exp((1 - r + a) x)
        env = DecayEnvelope("double", p.rate, 3.0 + a, 2.0, start=0.0)
        return integrate_decaying(integrand, 0.0, tol, env)
    if method == "finite-difference":
        h = _fd_step(r, step)
        outer = f_r(r + h, a, n, tol) - f_r(r - h, a, n, tol)
        inner = f_r(r + h / 2, a, n, tol) - f_r(r - h / 2, a, n, tol)
        d_outer = outer.value / (2 * h)
        d_inner = inner.value / h
        value = (4.0 * d_inner - d_outer) / 3.0
        noise = (4.0 * inner.err_estimate / h + outer.err_estimate / (2 * h)) / 3.0
        err = abs(value - d_inner) + noise
        return QuadResult(value, err, max(outer.upper_cutoff, inner.upper_cutoff),
                          outer.subdivisions + inner.subdivisions)
    raise DomainError(f"unknown method {method!r}")


def h_r(r: float, a: float, n: int = 1, tol: float | None = None) -> QuadResult:
    return f_r(r, a, n, tol) - f_r(1.0 - r, a, n, tol)


def im_xi_series(t, tol: float = 1e-12, cfg: SeriesConfig = SeriesConfig()) -> QuadResult:
    """``sum_n (-n^2 pi) h(r; a, n)`` with ``r = 1/2 - b``."""
    pt = _as_point(t)
    total = QuadResult(0.0, 0.0, 0.0, 0)
    for n in range(1, cfg.terms + 1):
        total = total + h_r(pt.r, pt.a, n, _term_tol(tol, n)).scaled(-n * n * PI)
    return total + QuadResult(0.0, cfg.tail_bound(pt.a), 0.0, 0)
