"""Independent evaluation of Xi through the completed zeta function.

Nothing here touches the integral representations: the only shared
dependencies are ``cmath``/``math``.  Two zeta algorithms (Borwein's
accelerated alternating series and Euler-Maclaurin summation) and the
reflection ``xi(s) = xi(1 - s)`` provide the internal error estimate.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, OracleAccuracyError

# Lanczos g = 7, 9 coefficients
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66),
    Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
    Fraction(-174611, 330), Fraction(854513, 138), Fraction(-236364091, 2730),
)

ACCURACY_LIMIT = 1e-8
GAMMA_REL_ERR = 1e-12


def gamma_complex(z: complex) -> complex:
    z = complex(z)
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


@lru_cache(maxsize=8)
def _borwein_weights(terms: int) -> tuple[float, ...]:
    # (d_k - d_n) / d_n computed exactly, then rounded once
    d, acc = [], Fraction(0)
    for i in range(terms + 1):
        acc += Fraction(
            math.factorial(terms + i - 1) * 4**i,
            math.factorial(terms - i) * math.factorial(2 * i),
        )
        d.append(acc * terms)
    dn = d[-1]
    return tuple(float((d[k] - dn) / dn) for k in range(terms))


def zeta_borwein(s: complex, terms: int = 64) -> complex:
    s = complex(s)
    weights = _borwein_weights(terms)
    eta = 0j
    for k in range(terms - 1, -1, -1):
        sign = -1.0 if k % 2 else 1.0
        eta += sign * weights[k] * cmath.exp(-s * math.log(k + 1))
    eta = -eta
    return eta / (1.0 - cmath.exp((1.0 - s) * math.log(2.0)))


def zeta_euler_maclaurin(s: complex, cut: int = 24, order: int = 12) -> complex:
    s = complex(s)
    head = 0j
    for k in range(cut - 1, 0, -1):
        head += cmath.exp(-s * math.log(k))
    log_n = math.log(cut)
    total = head + cmath.exp((1.0 - s) * log_n) / (s - 1.0) + 0.5 * cmath.exp(-s * log_n)
    rising = s  # s (s+1) ... (s+2j-2)
    fact = 2.0  # (2j)!
    for j in range(1, order + 1):
        total += float(_BERNOULLI[j - 1]) / fact * rising * cmath.exp(-(s + 2 * j - 1) * log_n)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


def xi_prefactor(s: complex) -> complex:
    """``1/2 s (s - 1) pi^{-s/2} Gamma(s/2)``."""
    s = complex(s)
    return 0.5 * s * (s - 1.0) * cmath.exp(-0.5 * s * math.log(math.pi)) * gamma_complex(0.5 * s)


def completed_xi(s: complex, zeta=zeta_borwein) -> complex:
    """``1/2 s (s - 1) pi^{-s/2} Gamma(s/2) zeta(s)``."""
    return xi_prefactor(s) * zeta(complex(s))


def oracle_estimate(a: float, b: float) -> tuple[complex, float]:
    """``Xi(a + b i)`` with an error estimate from the internal cross-checks."""
    if abs(b) >= 0.5:
        raise DomainError(f"|b| must be < 1/2, got {b}")
    if not 0 <= a <= 30:
        raise DomainError(f"oracle is valid for 0 <= a <= 30, got {a}")
    s = complex(0.5 - b, a)
    main = completed_xi(s)
    alt = completed_xi(s, zeta_euler_maclaurin)
    reflected = completed_xi(1.0 - s)
    # Gamma is shared by all three evaluations; its own error is budgeted as a floor
    err = max(abs(main - alt), abs(main - reflected)) + GAMMA_REL_ERR * abs(main)
    # zeta errors are absolute, so near a zero of xi the check is taken
    # relative to the prefactor rather than to the vanishing value itself
    scale = max(abs(main), abs(xi_prefactor(s)), 1e-300)
    if err / scale > ACCURACY_LIMIT:
        raise OracleAccuracyError(f"oracle self-checks disagree at s = {s}: rel {err / scale:.3g}")
    return main, err
