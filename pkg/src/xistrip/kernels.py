"""Closed-form scalar functions behind the xi-function monotonicity argument.

Everything here is vectorised over ``x`` with numpy and free of state.  Two
variables are in play:

* the original variable ``x >= 1`` of Riemann's integral (``phi`` and its
  derivatives, the kernels ``A`` and ``B``);
* the substituted variable ``x >= 0`` (``x -> exp(2x)``) of the amplitude-phase
  form, where the parameters ``(a, r, n)`` enter through :class:`OscParams`.

Throughout, ``q = 1 - r`` and ``R(x)^2 = (1 - q x)^2 + (a x)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularityError

PI = math.pi

#: Upper end of the region on which the argument is claimed.
A_REGION_MAX = 9.508


@dataclass(frozen=True)
class StripPoint:
    """``t = a + b i`` with ``|b| < 1/2``; classical ``s = r + i a``."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"non-finite strip point ({self.a}, {self.b})")
        if self.a < 0:
            raise DomainError(f"a must be >= 0, got {self.a}")
        if abs(self.b) >= 0.5:
            raise DomainError(f"|b| must be < 1/2, got {self.b}")

    @property
    def r(self) -> float:
        return 0.5 - self.b

    @property
    def t(self) -> complex:
        return complex(self.a, self.b)

    @classmethod
    def from_r(cls, a: float, r: float) -> "StripPoint":
        return cls(a, 0.5 - r)

    def mirror(self) -> "StripPoint":
        """The point with ``b -> -b`` (equivalently ``r -> 1 - r``)."""
        return StripPoint(self.a, -self.b)


@dataclass(frozen=True)
class OscParams:
    """Parameters ``(a, r, n)`` of one term of the imaginary-part series."""

    a: float
    r: float
    n: int = 1

    def __post_init__(self):
        if not math.isfinite(self.a) or self.a < 0:
            raise DomainError(f"a must be finite and >= 0, got {self.a}")
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"r must lie in (0, 1), got {self.r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")

    @property
    def q(self) -> float:
        return 1.0 - self.r

    @property
    def rate(self) -> float:
        """Coefficient ``n^2 pi`` of the double-exponential decay."""
        return self.n * self.n * PI


class SeriesSum(NamedTuple):
    value: np.ndarray | float
    terms: int
    tail_bound: float


# ---------------------------------------------------------------------------
# theta-type series phi(x) = sum exp(-n^2 pi x) and its derivatives


def _as_array(x):
    return np.asarray(x, dtype=float)


def _check_series_domain(x, tol):
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    x = _as_array(x)
    if x.size and (not np.all(np.isfinite(x)) or x.min() < 1.0):
        raise DomainError("phi series are only evaluated for x >= 1")
    return x


def _term_magnitude(n: int, x: float, deriv: int) -> float:
    lam = n * n * PI
    return lam**deriv * math.exp(-lam * x)


def series_tail_bound(terms: int, x: float, deriv: int = 0) -> float:
    """Bound on ``sum_{n > terms} (n^2 pi)^deriv exp(-n^2 pi x)``.

    Consecutive-term ratios decrease in ``n``, so the tail is dominated by a
    geometric series started at ``n = terms + 1``.
    """
    m = terms + 1
    ratio = ((m + 1) / m) ** (2 * deriv) * math.exp(-(2 * m + 1) * PI * x)
    if ratio >= 1.0:
        return math.inf
    return _term_magnitude(m, x, deriv) / (1.0 - ratio)


def phi_series(x, tol: float = 1e-16, deriv: int = 0, max_terms: int = 64) -> SeriesSum:
    """``d^k/dx^k phi(x)`` truncated where the analytic tail drops below ``tol``.

    The truncation order is chosen at the smallest ``x`` supplied; larger
    ``x`` only shrink the tail.
    """
    if deriv not in (0, 1, 2):
        raise DomainError(f"deriv must be 0, 1 or 2, got {deriv}")
    x = _check_series_domain(x, tol)
    x_min = float(x.min()) if x.size else 1.0
    terms = 1
    while series_tail_bound(terms, x_min, deriv) > tol:
        terms += 1
        if terms > max_terms:
            raise DomainError(f"tail bound {tol} not reachable with {max_terms} terms")
    total = np.zeros_like(x)
    sign = -1.0 if deriv == 1 else 1.0
    for n in range(terms, 0, -1):  # smallest terms first
        lam = n * n * PI
        total += lam**deriv * np.exp(-lam * x)
    value = sign * total
    if value.ndim == 0:
        value = float(value)
    return SeriesSum(value, terms, series_tail_bound(terms, x_min, deriv))


def phi(x, tol: float = 1e-16):
    return phi_series(x, tol, 0).value


def phi_prime(x, tol: float = 1e-16):
    return phi_series(x, tol, 1).value


def phi_double_prime(x, tol: float = 1e-16):
    return phi_series(x, tol, 2).value


# ---------------------------------------------------------------------------
# kernels of the split  xi = Re + i Im  (original variable x >= 1)


def kernel_A(x, a: float, b: float):
    x = _as_array(x)
    half_log = 0.5 * np.log(x)
    up, down = np.exp(b * half_log), np.exp(-b * half_log)
    c, s = np.cos(a * half_log), np.sin(a * half_log)
    return ((0.5 + b) * down + (0.5 - b) * up) * c + a * (down + up) * s


def kernel_B(x, a: float, b: float):
    x = _as_array(x)
    half_log = 0.5 * np.log(x)
    up, down = np.exp(b * half_log), np.exp(-b * half_log)
    c, s = np.cos(a * half_log), np.sin(a * half_log)
    return ((0.5 + b) * down - (0.5 - b) * up) * s + a * (up - down) * c


# ---------------------------------------------------------------------------
# amplitude-phase form (substituted variable x >= 0)


def _require_phase(p: OscParams):
    if p.a <= 0:
        raise DomainError("the phase decomposition needs a > 0")


def radius_sq(x, p: OscParams):
    """``R(x)^2 = (1 - (1-r) x)^2 + (a x)^2``."""
    x = _as_array(x)
    return (1.0 - p.q * x) ** 2 + (p.a * x) ** 2


def gamma_phase(x, p: OscParams):
    """Continuous phase of ``(1 - (1-r)x, a x)`` with ``gamma(0) = 0``.

    For ``x > 0`` the sine component ``a x`` is positive, so ``atan2`` stays on
    the branch ``(0, pi)``.  This is exactly the arctangent form unwrapped by
    ``+pi`` where the cosine component changes sign at ``x = 1/(1-r)``.
    """
    _require_phase(p)
    x = _as_array(x)
    return np.arctan2(p.a * x, 1.0 - p.q * x)


def theta(x, p: OscParams):
    x = _as_array(x)
    return p.a * x + gamma_phase(x, p)


def theta_prime(x, p: OscParams):
    # the nested fraction of the derivative collapses to a (1 + 1/R^2)
    _require_phase(p)
    return p.a * (1.0 + 1.0 / radius_sq(x, p))


def log_g_amp(x, p: OscParams):
    x = _as_array(x)
    return -p.rate * np.exp(2.0 * x) + x * (p.r + 2.0) + 0.5 * np.log(radius_sq(x, p))


def g_amp(x, p: OscParams):
    """Amplitude ``exp(-n^2 pi e^{2x} + x(r+2)) R(x)``; never negative."""
    x = _as_array(x)
    return np.exp(-p.rate * np.exp(2.0 * x) + x * (p.r + 2.0)) * np.sqrt(radius_sq(x, p))


def _p_parts(x, p: OscParams):
    x = _as_array(x)
    num = -(1.0 - x * p.q) * p.q + p.a * p.a * x
    den = radius_sq(x, p)
    if np.any(den == 0.0):
        raise SingularityError("P(x) denominator vanishes (a = 0 at x = 1/(1-r))")
    return num, den


def P_fun(x, p: OscParams):
    num, den = _p_parts(x, p)
    return num / den


def P_prime(x, p: OscParams):
    # numerator is ((1-r)^2 + a^2) D - 2 N^2 = -m^2 (x - x1)(x - x2)
    num, den = _p_parts(x, p)
    m = p.q * p.q + p.a * p.a
    return (m * den - 2.0 * num * num) / (den * den)


def J_fun(x, p: OscParams):
    """Logarithmic derivative ``g'/g`` of :func:`g_amp`."""
    x = _as_array(x)
    return -2.0 * p.rate * np.exp(2.0 * x) + p.r + 2.0 + P_fun(x, p)


def p_critical_points(p: OscParams) -> tuple[float, float]:
    m = p.q * p.q + p.a * p.a
    if m <= 0.0:
        raise DomainError("(1-r)^2 + a^2 must be positive")
    return (p.q - p.a) / m, (p.q + p.a) / m


def p_peak_bound(p: OscParams) -> float:
    if p.a <= 0:
        raise DomainError("peak bound needs a > 0")
    return p.q * p.q / (2.0 * p.a) + p.a / 2.0


def j_negativity_bound(p: OscParams) -> float:
    """Closed-form majorant of ``J`` built from the peak of ``P`` at ``x2``."""
    _, x2 = p_critical_points(p)
    return -2.0 * p.rate * math.exp(2.0 * x2) + p.r + 2.0 + p_peak_bound(p)
