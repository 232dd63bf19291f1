"""Adaptive Gauss-Kronrod quadrature for decaying integrands, plus phase-crossing search.

Integrands are called with numpy arrays of abscissae (any shape) and must
return an array of the same shape.  All routines are deterministic: panel
order, refinement order and summation order depend only on the inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BracketingError,
    DomainError,
    EnvelopeViolationError,
    NonFiniteIntegrandError,
    QuadratureError,
    SubdivisionLimitError,
)
from .kernels import OscParams, theta, theta_prime

Integrand = Callable[[np.ndarray], np.ndarray]

# 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[:3][::-1]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    """An integral (or derived quantity) with its error estimate.

    ``err_estimate`` already includes any analytic tail beyond
    ``upper_cutoff``.
    """

    value: float
    err_estimate: float
    upper_cutoff: float
    subdivisions: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.err_estimate + other.err_estimate,
            max(self.upper_cutoff, other.upper_cutoff),
            self.subdivisions + other.subdivisions,
        )

    def __sub__(self, other: "QuadResult") -> "QuadResult":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(
            factor * self.value, abs(factor) * self.err_estimate, self.upper_cutoff, self.subdivisions
        )


def _gk_panels(f: Integrand, left: np.ndarray, right: np.ndarray):
    center = 0.5 * (left + right)
    half = 0.5 * (right - left)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NonFiniteIntegrandError(f"integrand is not finite at x = {bad!r}")
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    roundoff = 50.0 * _EPS * half * (np.abs(fx) @ KRONROD_WEIGHTS)
    return kron, np.abs(kron - gauss) + roundoff


def integrate_adaptive(
    f: Integrand,
    lo: float,
    hi: float,
    tol: float,
    *,
    rtol: float = 0.0,
    max_subdivisions: int = 4000,
    min_panels: int = 8,
    breakpoints: Sequence[float] | None = None,
) -> QuadResult:
    """Integrate ``f`` over ``[lo, hi]`` until the summed error is below ``max(tol, rtol |I|)``.

    Panels are refined in batches: each pass bisects every panel whose
    error exceeds its width-proportional share of the target.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"need finite lo < hi, got [{lo}, {hi}]")
    if tol <= 0 and rtol <= 0:
        raise DomainError("tol or rtol must be positive")
    if breakpoints is not None:
        edges = np.unique(np.clip(np.asarray(breakpoints, dtype=float), lo, hi))
        edges = np.union1d(edges, [lo, hi])
    else:
        edges = np.linspace(lo, hi, min_panels + 1)
    left, right = edges[:-1], edges[1:]
    initial = left.size
    vals, errs = _gk_panels(f, left, right)
    length = hi - lo

    while True:
        total = math.fsum(vals)
        err = math.fsum(errs)
        target = max(tol, rtol * abs(total))
        if err <= target:
            return QuadResult(total, err, hi, left.size - initial)
        split = errs > target * (right - left) / length
        if not np.any(split):
            split = errs == errs.max()
        if left.size + int(split.sum()) - initial > max_subdivisions:
            raise SubdivisionLimitError(
                f"more than {max_subdivisions} subdivisions on [{lo}, {hi}] "
                f"(error {err:.3g} > target {target:.3g})"
            )
        mid = 0.5 * (left[split] + right[split])
        if np.any((mid <= left[split]) | (mid >= right[split])):
            raise QuadratureError(
                f"panel below floating-point resolution on [{lo}, {hi}] (error {err:.3g})"
            )
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        new_vals, new_errs = _gk_panels(f, new_left, new_right)
        keep = ~split
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])
        order = np.argsort(left, kind="stable")
        left, right, vals, errs = left[order], right[order], vals[order], errs[order]


# ---------------------------------------------------------------------------
# semi-infinite integrals with analytic tails


@dataclass(frozen=True)
class DecayEnvelope:
    """Majorant of ``|f|`` valid for ``x >= start``.

    * ``single``: ``amplitude * x**growth * exp(-rate x)``
    * ``double``: ``amplitude * exp(-rate exp(2x) + growth x)``
    """

    kind: str
    rate: float
    growth: float = 0.0
    amplitude: float = 1.0
    start: float = 0.0

    def __post_init__(self):
        if self.kind not in ("single", "double"):
            raise DomainError(f"unknown envelope kind {self.kind!r}")
        if self.rate <= 0 or self.amplitude <= 0:
            raise DomainError("envelope rate and amplitude must be positive")
        if self.kind == "single" and self.growth != 0 and self.start <= 0:
            raise DomainError("a power-law factor needs start > 0")

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "single":
            out = math.log(self.amplitude) - self.rate * x
            if self.growth:
                out = out + self.growth * np.log(x)
            return out
        return math.log(self.amplitude) - self.rate * np.exp(2.0 * x) + self.growth * x

    def __call__(self, x):
        return np.exp(self.log_value(x))

    def log_tail(self, x_cut: float) -> float:
        """log of an upper bound on ``int_{x_cut}^inf envelope``."""
        x_cut = max(x_cut, self.start)
        if self.kind == "single":
            lam, p, X = self.rate, self.growth, x_cut
        else:
            # u = exp(2x):  1/2 int_U^inf exp(-c u) u^(beta/2 - 1) du
            lam, p, X = self.rate, self.growth / 2.0 - 1.0, math.exp(2.0 * x_cut)
        slope = lam - max(p, 0.0) / X if X > 0 else (lam if p <= 0 else -1.0)
        if slope <= 0:
            return math.inf
        log_pow = p * math.log(X) if p else 0.0
        out = math.log(self.amplitude) + log_pow - lam * X - math.log(slope)
        return out - math.log(2.0) if self.kind == "double" else out

    def tail(self, x_cut: float) -> float:
        return math.exp(min(self.log_tail(x_cut), 700.0))

    def cutoff(self, lo: float, tail_tol: float) -> float:
        """Smallest (to bisection accuracy) ``X > lo`` with ``tail(X) <= tail_tol``."""
        log_target = math.log(tail_tol)
        base = max(lo, self.start)
        step = 1.0 / self.rate if self.kind == "single" else 0.25
        prev, x = base, base + step
        while self.log_tail(x) > log_target:
            prev, step = x, 2.0 * step
            x = base + step
            if step > 1e8:
                raise QuadratureError("envelope tail never drops below the tolerance")
        lo_x, hi_x = prev, x
        for _ in range(60):
            mid = 0.5 * (lo_x + hi_x)
            if self.log_tail(mid) > log_target:
                lo_x = mid
            else:
                hi_x = mid
        return max(hi_x, lo + step * 1e-3)


def check_envelope(f: Integrand, env: DecayEnvelope, lo: float, hi: float, samples: int = 33):
    xs = np.linspace(max(lo, env.start), hi, samples)
    vals = np.abs(np.asarray(f(xs), dtype=float))
    bound = env(xs)
    bad = vals > bound * (1.0 + 1e-9) + 1e-300
    if np.any(bad):
        x = xs[bad][0]
        raise EnvelopeViolationError(
            f"|f({x!r})| = {vals[bad][0]:.6g} exceeds envelope {bound[bad][0]:.6g}"
        )


def integrate_decaying(
    f: Integrand,
    lo: float,
    tol: float,
    env: DecayEnvelope,
    *,
    envelope_samples: int = 33,
    **kwargs,
) -> QuadResult:
    """Integrate ``f`` over ``[lo, inf)``: half the budget to the tail, half to the body."""
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    x_cut = env.cutoff(lo, tol / 2.0)
    check_envelope(f, env, lo, x_cut, envelope_samples)
    body = integrate_adaptive(f, lo, x_cut, tol / 2.0, **kwargs)
    return QuadResult(body.value, body.err_estimate + env.tail(x_cut), x_cut, body.subdivisions)


# ---------------------------------------------------------------------------
# theta = k pi crossings


def bisect_increasing(fn: Callable[[float], float], target: float, lo: float, hi: float,
                      tol_x: float = 0.0) -> float:
    """Root of ``fn(x) = target`` for increasing ``fn`` bracketed by ``[lo, hi]``.

    Bisects down to floating-point resolution unless ``tol_x`` stops it
    earlier; returns whichever bracket end has the smaller residual.
    """
    f_lo, f_hi = fn(lo) - target, fn(hi) - target
    if f_lo > 0 or f_hi < 0:
        raise BracketingError(f"[{lo}, {hi}] does not bracket {target}")
    while hi - lo > tol_x:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid) - target
        if f_mid == 0.0:
            return mid
        if f_mid < 0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if -f_lo <= f_hi else hi


def find_phase_crossing(
    k: int,
    p: OscParams,
    tol_x: float = 0.0,
    *,
    start: float | None = None,
    x_range: float = 1e6,
) -> float:
    """The point ``x_k`` where the phase reaches ``k pi``.

    ``start`` is ``x_{k-1}`` when already known; otherwise the crossings are
    walked from ``x_0 = 0``.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if p.a <= 0:
        raise DomainError("phase crossings need a > 0")
    if start is None:
        start = 0.0
        for j in range(1, k):
            start = find_phase_crossing(j, p, tol_x, start=start, x_range=x_range)
    target = k * math.pi

    def th(x: float) -> float:
        return float(theta(x, p))

    step = math.pi / (4.0 * p.a)
    hi = start + step
    while th(hi) < target:
        step *= 2.0
        hi = start + step
        if hi - start > x_range:
            raise BracketingError(f"theta does not reach {k} pi within {x_range} of {start}")
    probe = np.linspace(start, hi, 65)
    if not np.all(theta_prime(probe, p) > 0):
        raise BracketingError("theta is not increasing on the bracket")
    return bisect_increasing(th, target, start, hi, tol_x)


def phase_crossings(p: OscParams, K: int, tol_x: float = 0.0) -> np.ndarray:
    """``[x_0 = 0, x_1, ..., x_K]``."""
    xs = [0.0]
    for k in range(1, K + 1):
        xs.append(find_phase_crossing(k, p, tol_x, start=xs[-1]))
    return np.array(xs)
