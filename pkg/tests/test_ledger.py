import math

import mpmath as mp
import pytest

from xistrip.errors import DomainError
from xistrip.kernels import OscParams
from xistrip.ledger import half_period_ledger


@pytest.fixture(scope="module")
def ledger_2_half():
    return half_period_ledger(OscParams(2.0, 0.5, 1), K=8)


def test_signs_alternate_from_positive(ledger_2_half):
    signs = [e.sign for e in ledger_2_half.entries]
    assert signs == [1, -1] * 4
    assert all(math.copysign(1, e.integral) == e.sign for e in ledger_2_half.entries if e.integral != 0)


def test_magnitudes_strictly_decrease(ledger_2_half):
    logs = [e.log_abs for e in ledger_2_half.entries]
    assert all(x > y for x, y in zip(logs, logs[1:]))


def test_structure_checks(ledger_2_half):
    c = ledger_2_half.checks
    for key in ("contiguous", "signs_alternate", "magnitudes_decreasing",
                "pairs_dominated_by_first", "partial_sums_bracket"):
        assert c[key], key
    e = ledger_2_half.entries
    assert e[0].x_lo == 0.0
    assert all(e[i].x_lo == e[i - 1].x_hi for i in range(1, len(e)))


def test_total_matches_minus_half_f_prime(ledger_2_half):
    cmp = ledger_2_half.compare_f_prime()
    assert cmp["agrees"]
    assert cmp["deviation"] <= cmp["budget"]


def test_first_half_periods_against_mpmath(ledger_2_half):
    mp.mp.dps = 30
    p = ledger_2_half.params

    def integrand(x):
        g = mp.exp(-p.rate * mp.exp(2 * x) + x * (p.r + 2)) * mp.sqrt((1 - p.q * x) ** 2 + (p.a * x) ** 2)
        return g * mp.sin(p.a * x + mp.atan2(p.a * x, 1 - p.q * x))

    # the mass hugs the left end, so the reference needs graded breakpoints
    for e in ledger_2_half.entries[:4]:
        lo, hi = mp.mpf(e.x_lo), mp.mpf(e.x_hi)
        pts = [lo] + [lo + (hi - lo) * mp.mpf(2) ** -k for k in range(60, -1, -1)]
        ref = mp.quad(integrand, pts)
        assert e.log_abs == pytest.approx(float(mp.log(abs(ref))), abs=1e-8)


def test_deep_entries_survive_underflow():
    ledger = half_period_ledger(OscParams(9.5, 0.9, 2), K=8)
    assert ledger.entries[-1].integral == 0.0  # far below double range
    assert math.isfinite(ledger.entries[-1].log_abs)
    assert ledger.checks["magnitudes_decreasing"]


@pytest.mark.parametrize("a", [1.0, 5.0, 9.5])
@pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("n", [1, 2])
def test_ledger_grid(a, r, n):
    ledger = half_period_ledger(OscParams(a, r, n), K=8)
    c = ledger.checks
    assert c["signs_alternate"] and c["magnitudes_decreasing"] and c["pairs_dominated_by_first"]
    assert ledger.compare_f_prime()["agrees"]


def test_to_dict_round_trip_fields(ledger_2_half):
    d = ledger_2_half.to_dict()
    assert d["params"] == {"a": 2.0, "r": 0.5, "n": 1}
    assert len(d["entries"]) == 8
    assert d["totals"][-1] == ledger_2_half.total


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        half_period_ledger(OscParams(0.0, 0.5), 4)
    with pytest.raises(DomainError):
        half_period_ledger(OscParams(1.0, 0.5), 1)
