"""Half-period decomposition of ``int_0^inf g(x) sin(theta(x)) dx``.

Past the first few crossings ``g`` sits far below the double-precision
range (``g ~ exp(-pi e^{2x})``), so every half-period integral is computed
relative to ``g`` at its left end, in the offset variable ``s = x - x_lo``,
and its magnitude is carried as a logarithm.  The phase increment and the
log-amplitude increment are both formed without cancellation, which keeps
the integrand resolvable even when its mass lies within ``1e-18`` of the
crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kernels import OscParams, J_fun, log_g_amp, radius_sq
from .quadrature import DecayEnvelope, integrate_adaptive, phase_crossings
from .xi_eval import f_prime


@dataclass(frozen=True)
class HalfPeriodEntry:
    k: int
    x_lo: float
    x_hi: float
    integral: float  # 0.0 once the value underflows; see log_abs
    sign: int
    log_abs: float
    log_err: float

    @property
    def err(self) -> float:
        return math.exp(self.log_err) if self.log_err > -745 else 0.0


@dataclass
class HalfPeriodLedger:
    params: OscParams
    entries: list[HalfPeriodEntry]
    totals: list[float]
    tail_bound: float
    checks: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.totals[-1]

    @property
    def err(self) -> float:
        return math.fsum(e.err for e in self.entries)

    def validate(self) -> dict:
        e = self.entries
        signs = [x.sign for x in e]
        logs = [x.log_abs for x in e]
        contiguous = all(e[i].x_lo == e[i - 1].x_hi for i in range(1, len(e))) and e[0].x_lo == 0.0
        alternate = signs[0] == 1 and all(signs[i] == -signs[i - 1] for i in range(1, len(e)))
        gaps = [logs[i] - logs[i + 1] for i in range(len(e) - 1)]
        decreasing = all(g > 0 for g in gaps)
        # pairs (I_1, I_2), (I_3, I_4), ... start at even crossings x_0, x_2, ...
        pairs = []
        for i in range(0, len(e) - 1, 2):
            first, second = e[i], e[i + 1]
            pair_sign = first.sign if first.log_abs > second.log_abs else second.sign
            pairs.append(pair_sign == first.sign)
        # alternating-series behaviour: S_k - S_K has the sign opposite to I_{k+1}
        bracket = all(
            (self.totals[i] - self.total) * e[i + 1].sign <= 0.0 for i in range(len(e) - 1)
        )
        self.checks = {
            "contiguous": contiguous,
            "signs_alternate": alternate,
            "magnitudes_decreasing": decreasing,
            "pairs_dominated_by_first": all(pairs),
            "partial_sums_bracket": bracket,
            "min_log_gap": min(gaps) if gaps else math.inf,
        }
        return self.checks

    def compare_f_prime(self, tol: float | None = None) -> dict:
        """Check ``ledger total + tail = -f'(r)/2`` within the combined budgets."""
        p = self.params
        fp = f_prime(p.r, p.a, p.n, tol)
        target = -0.5 * fp.value
        deviation = abs(self.total - target)
        budget = self.err + self.tail_bound + 0.5 * fp.err_estimate
        return {
            "ledger_total": self.total,
            "minus_half_f_prime": target,
            "deviation": deviation,
            "budget": budget,
            "agrees": deviation <= budget,
        }

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {"a": p.a, "r": p.r, "n": p.n},
            "entries": [
                {
                    "k": x.k, "x_lo": x.x_lo, "x_hi": x.x_hi, "integral": x.integral,
                    "sign": x.sign, "log_abs": x.log_abs,
                }
                for x in self.entries
            ],
            "totals": list(self.totals),
            "tail_bound": self.tail_bound,
            "checks": dict(self.checks),
        }


def _scaled_half_period(p: OscParams, lo: float, hi: float, rtol: float):
    """``int_lo^hi g sin(theta) dx / g(lo)`` up to the sign ``(-1)^{k-1}``."""
    width = hi - lo
    c_lo = 1.0 - p.q * lo
    r2_lo = float(radius_sq(lo, p))
    slope = -2.0 * p.q * c_lo + 2.0 * p.a * p.a * lo
    m = p.q * p.q + p.a * p.a
    grow = p.rate * math.exp(2.0 * lo)

    def integrand(s):
        log_amp = -grow * np.expm1(2.0 * s) + (p.r + 2.0) * s + 0.5 * np.log1p(s * (slope + m * s) / r2_lo)
        dot = c_lo * (c_lo - p.q * s) + p.a * p.a * lo * (lo + s)
        dphase = p.a * s + np.arctan2(p.a * s, dot)
        return np.exp(log_amp) * np.sin(dphase)

    decay = max(-float(J_fun(lo, p)), 0.0)
    breaks = None
    if decay * width > 64.0:
        s0 = 1.0 / decay
        count = int(math.ceil(math.log2(width / s0))) + 1
        breaks = [0.0] + [s0 * 2.0**j for j in range(count) if s0 * 2.0**j < width] + [width]
    return integrate_adaptive(integrand, 0.0, width, 1e-300, rtol=rtol, breakpoints=breaks)


def half_period_ledger(p: OscParams, K: int = 8, rtol: float = 1e-11) -> HalfPeriodLedger:
    if p.a <= 0:
        raise DomainError("the half-period ledger needs a > 0")
    if K < 2:
        raise DomainError(f"K must be at least 2, got {K}")
    xs = phase_crossings(p, K)
    entries = []
    for k in range(1, K + 1):
        lo, hi = float(xs[k - 1]), float(xs[k])
        res = _scaled_half_period(p, lo, hi, rtol)
        log_g_lo = float(log_g_amp(lo, p))
        sign = 1 if k % 2 == 1 else -1
        if res.value <= 0.0:
            raise DomainError(f"half period {k} integrand lost its sign ({res.value!r})")
        log_abs = log_g_lo + math.log(res.value)
        log_err = log_g_lo + math.log(res.err_estimate) if res.err_estimate > 0 else -math.inf
        integral = sign * math.exp(log_abs) if log_abs > -745 else 0.0
        entries.append(HalfPeriodEntry(k, lo, hi, integral, sign, log_abs, log_err))
    totals = []
    for k in range(1, K + 1):
        totals.append(math.fsum(e.integral for e in entries[:k]))
    env = DecayEnvelope("double", p.rate, 3.0 + p.a, 1.0)
    ledger = HalfPeriodLedger(p, entries, totals, env.tail(float(xs[-1])))
    ledger.validate()
    return ledger
