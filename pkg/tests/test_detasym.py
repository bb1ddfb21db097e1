"""Schur expansion identity and the closed-form determinant asymptotics."""

import math
import random
from fractions import Fraction as F

import mpmath as mp
import numpy as np
import pytest

from usfmelon import (
    InsufficientCutoffError,
    Partition,
    ShiftVectors,
    TruncatedSeries,
    coeff_det,
    fk_direct,
    fk_expand,
    log_leading,
    partitions_up_to,
    powerlaw_leading,
    schur_eval,
)
from usfmelon.detasym import vandermonde_pair


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))
    assert Partition((3, 1, 0)).weight == 4


def test_partitions_up_to_enumeration():
    parts = partitions_up_to(2, 3)
    expected = {(), (1,), (2,), (1, 1), (3,), (2, 1)}
    assert {p.parts for p in parts} == expected
    weights = [p.weight for p in parts]
    assert weights == sorted(weights)  # graded order


def test_schur_empty_partition():
    assert schur_eval(Partition(()), (F(3), F(5))) == 1


def test_schur_single_box_is_sum():
    x = (F(1, 2), F(2))
    assert schur_eval(Partition((1,)), x) == F(5, 2)


def test_schur_21_matches_monomial_expansion():
    # s_(2,1) = m_(2,1) + 2 m_(1,1,1); in two variables the second term dies
    x = (F(1), F(2))
    expected = F(1) ** 2 * F(2) + F(2) ** 2 * F(1)
    assert schur_eval(Partition((2, 1)), x) == expected


def test_schur_fallback_for_coincident_values():
    # bialternant is unusable at x1 = x2; tableau route takes over
    assert schur_eval(Partition((2, 1)), (F(1), F(1))) == 2
    # cross-check fallback against bialternant at distinct points
    lam = Partition((3, 1))
    x = (F(2), F(5))
    from usfmelon.detasym import _ssyt_rows

    tableau_total = sum(
        math.prod(x[v - 1] for v in t) for t in _ssyt_rows((3, 1), 2, None)
    )
    assert schur_eval(lam, x) == tableau_total


def test_coeff_det_k1_is_b0():
    b = TruncatedSeries((F(7), F(1), F(4)))
    assert coeff_det(Partition((0,)), Partition((0,)), b) == 7


def test_coeff_det_k2_hand_value():
    b0, b1, b2 = F(2), F(-3), F(5, 7)
    b = TruncatedSeries((b0, b1, b2))
    got = coeff_det(Partition((0, 0)), Partition((0, 0)), b)
    assert got == 2 * b0 * b2 - b1 * b1


def test_coeff_det_powerlaw_series():
    r = F(9)
    b = TruncatedSeries((r**-2, -2 * r**-3, 3 * r**-4))
    assert coeff_det(Partition((0, 0)), Partition((0, 0)), b) == 2 * r**-6


def test_coeff_det_index_out_of_cutoff():
    b = TruncatedSeries((F(1), F(1)))
    with pytest.raises(InsufficientCutoffError):
        coeff_det(Partition((1, 0)), Partition((1, 0)), b)


def test_fk_k1_reproduces_series():
    b = TruncatedSeries((F(2), F(-1), F(1, 3), F(5)))
    sv = ShiftVectors((F(1, 2),), (F(3),))
    cutoff = 3
    direct = fk_direct(b, sv, cutoff)
    t = F(3) - F(1, 2)
    assert direct == tuple(b.coeffs[l] * t**l for l in range(cutoff + 1))
    assert fk_expand(b, sv, cutoff) == direct


def test_fk_k2_golden_instance():
    b = TruncatedSeries((F(1),) * 6)
    sv = ShiftVectors((F(0), F(1)), (F(1), F(0)))
    assert fk_expand(b, sv, 4) == fk_direct(b, sv, 4)


def test_fk_direct_antisymmetric_in_v():
    b = TruncatedSeries(tuple(F(i + 1, 2) for i in range(7)))
    sv = ShiftVectors((F(0), F(2)), (F(1), F(3)))
    swapped = ShiftVectors(sv.u, (sv.v[1], sv.v[0]))
    a = fk_direct(b, sv, 6)
    c = fk_direct(b, swapped, 6)
    assert c == tuple(-x for x in a)


def test_fk_insufficient_cutoff_errors():
    b = TruncatedSeries((F(1), F(1)))
    sv = ShiftVectors((F(0),), (F(1),))
    with pytest.raises(InsufficientCutoffError):
        fk_direct(b, sv, 5)
    sv2 = ShiftVectors((F(0), F(1)), (F(2), F(3)))
    b2 = TruncatedSeries((F(1), F(1), F(1)))
    with pytest.raises(InsufficientCutoffError):
        fk_expand(b2, sv2, 5)  # needs b up to (5 - 2) + 2 = 5


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fundamental_identity_random_instances(k):
    """fk_expand == fk_direct exactly on 50 random rational instances."""
    rng = random.Random(1000 + k)
    for trial in range(50):
        cutoff = rng.randint(k * (k - 1), 8)
        b = TruncatedSeries(
            tuple(F(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(cutoff + 1))
        )
        while True:
            u = tuple(F(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(k))
            v = tuple(F(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(k))
            if len(set(u)) == k and len(set(v)) == k:
                break
        sv = ShiftVectors(u, v)
        assert fk_direct(b, sv, cutoff) == fk_expand(b, sv, cutoff), (k, trial)


def test_powerlaw_k1():
    sv = ShiftVectors((2,), (5,))
    assert powerlaw_leading(1.7, 1, sv, 50.0) == pytest.approx(50.0**-1.7)


def test_powerlaw_k2_hand_value_and_numeric():
    sv = ShiftVectors((1, 2), (2, 1))
    r = 10**4
    lead = powerlaw_leading(2.0, 2, sv, float(r))
    assert lead == pytest.approx(2.0 * float(r) ** -6)
    with mp.workdps(50):
        m = [[(mp.mpf(r) + u - v) ** -2 for v in sv.v] for u in sv.u]
        d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        assert abs(float(d * r**6) - 2.0) < 10.0 / r


def test_powerlaw_alpha_zero_k2_vanishes():
    sv = ShiftVectors((1, 2), (2, 1))
    assert powerlaw_leading(0.0, 2, sv, 100.0) == 0.0


def _hp_det(g, sv, r, dps):
    with mp.workdps(dps):
        k = sv.k
        m = mp.matrix([[g(mp.mpf(r) + sv.u[i] - sv.v[j]) for j in range(k)] for i in range(k)])
        return mp.det(m)


@pytest.mark.parametrize(
    "k,alpha",
    [(2, 2.0), (3, 2.0), (2, 0.5)],
)
def test_powerlaw_residual_slope(k, alpha):
    """det/leading - 1 decays like 1/r: fitted slope -1 +- 15%.

    The O(1/r) term is proportional to sum(v) - sum(u), so asymmetric
    shifts are required to observe it.
    """
    u = tuple(range(0, 2 * k, 2))  # 0, 2, 4, ...
    v = tuple(2 * k + 1 - i for i in range(k))  # distinct, sum(v) != sum(u)
    sv = ShiftVectors(u, v)
    residuals = []
    rs = (10**2, 10**3, 10**4)
    for r in rs:
        dps = 40 + int(k * (alpha + k) * math.log10(r))
        det = _hp_det(lambda x: x ** (-mp.mpf(alpha)), sv, r, dps)
        lead = powerlaw_leading(alpha, k, sv, float(r))
        residuals.append(abs(float(det / mp.mpf(lead)) - 1.0))
    slope = float(np.polyfit(np.log(rs), np.log(residuals), 1)[0])
    assert -1.15 <= slope <= -0.85, residuals


def test_log_leading_k1():
    sv = ShiftVectors((1,), (2,))
    r = 1000.0
    assert log_leading(5.0, 2.0, 1, sv, r, "const_term") == pytest.approx(1.0)
    # 1x1 determinant is c1 - c2 ln(r + u - v); the c1-free part is negative
    assert log_leading(0.0, 2.0, 1, sv, r, "log_term") == pytest.approx(-2.0 * math.log(r))


def test_log_const_term_is_c1_coefficient():
    """det[c1 - c2 log(.)] is exactly linear in c1; its coefficient matches."""
    sv = ShiftVectors((1, 2), (2, 1))
    c2 = 1.0
    r = 10**3
    with mp.workdps(60):
        base = [[-c2 * mp.log(mp.mpf(r) + u - v) for v in sv.v] for u in sv.u]
        det0 = base[0][0] * base[1][1] - base[0][1] * base[1][0]
        shifted = [[e + 1 for e in row] for row in base]
        det1 = shifted[0][0] * shifted[1][1] - shifted[0][1] * shifted[1][0]
        coefficient = float(det1 - det0)
    predicted = log_leading(0.0, c2, 2, sv, float(r), "const_term")
    assert abs(coefficient / predicted - 1.0) < 10.0 / r


def test_log_term_matches_symbolic_expansion():
    """The c1-free part approaches the log_term prediction as O(1/ln r)."""
    sv = ShiftVectors((1, 2), (2, 1))
    c2 = 1.0
    for r, band in ((10**4, 0.15), (10**8, 0.06)):
        det0 = float(_hp_det(lambda x: -c2 * mp.log(x), sv, r, 60))
        predicted = log_leading(0.0, c2, 2, sv, float(r), "log_term")
        assert abs(det0 / predicted - 1.0) < band
        assert det0 < 0 and predicted < 0


def test_order_of_limits_const_term():
    """det/c1 converges to the c1-coefficient with residual shrinking ~1/c1."""
    sv = ShiftVectors((1, 2), (2, 1))
    c2 = 1.0
    r = 10**3
    predicted = log_leading(0.0, c2, 2, sv, float(r), "const_term")
    errors = []
    for c1 in (10**3, 10**6):
        det = float(_hp_det(lambda x: c1 - c2 * mp.log(x), sv, r, 60))
        errors.append(abs(det / c1 - predicted))
    ratio = errors[0] / errors[1]
    assert 500 <= ratio <= 2000  # residual proportional to 1/c1


def test_vandermonde_pair_orientation():
    sv = ShiftVectors((1, 2), (2, 1))
    assert vandermonde_pair(sv) == 1
    sv2 = ShiftVectors((0, 2), (5, 1))
    assert vandermonde_pair(sv2) == (5 - 1) * (2 - 0)
