"""Ring arithmetic, certified evaluation and the two determinant routes."""

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from usfmelon import ConsistencyError, Interval, PiPoly, SymbolicGreen, det, det_minors, sym_det
from usfmelon.exactnum import pi_bounds

from conftest import pp


def test_add_cancels_pi_terms():
    assert pp(1, -2) + pp("-1/2", 2) == pp("1/2")


def test_monomial_product():
    assert pp(0, 2) * pp(0, 2) == pp(0, 0, 4)


def test_product_hand_expansion():
    lhs = pp(1, -2) * pp("3/4", -2)
    expected = pp("3/4", "-7/2", 4)
    assert lhs == expected
    # numeric re-verification of the hand expansion
    a = 1 - 2 / math.pi
    b = 3 / 4 - 2 / math.pi
    assert abs(float(lhs.eval_interval(64)) - a * b) < 1e-12


def test_sub_and_neg():
    p = pp("5/3", 0, -1)
    assert p - p == PiPoly()
    assert -p + p == PiPoly()


def test_exact_div_roundtrip():
    a = pp(1, -2, "3/7")
    b = pp("2/3", 5)
    assert (a * b).exact_div(b) == a
    with pytest.raises(ValueError):
        pp(1, 1).exact_div(pp(0, 0, 1))


def test_det_1x1():
    assert det([[pp(1, -2)]]) == pp(1, -2)


def test_det_2x2_green_matrix():
    g0, g1 = pp(1, -2), pp("-1/2", 2)
    matrix = [[g0, g1], [g1, g0]]
    assert det(matrix) == pp("3/4", -2)
    assert det_minors(matrix) == pp("3/4", -2)


def test_det_row_swap_flips_sign():
    rng = random.Random(3)
    m = [[pp(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(3)] for _ in range(3)]
    swapped = [m[1], m[0], m[2]]
    assert det(swapped) == -det(m)


def test_det_zero_pivot_and_singular():
    zero = PiPoly()
    one = pp(1)
    # zero pivot forces a row swap
    m = [[zero, one], [one, zero]]
    assert det(m) == -one
    # genuinely singular
    row = [pp(1, 1), pp(2, -3)]
    assert det([row, row]) == PiPoly()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_det_bareiss_matches_minors_random(n):
    rng = random.Random(100 + n)
    for _ in range(10):
        m = [
            [
                pp(F(rng.randint(-6, 6), rng.randint(1, 4)),
                   F(rng.randint(-6, 6), rng.randint(1, 4)))
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        assert det(m) == det_minors(m)


def test_det_numeric_agreement_with_float_determinant():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(2, 4)
        m = [
            [pp(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(n)]
            for _ in range(n)
        ]
        exact = float(det(m).eval_interval(64)) if det(m) else 0.0
        floats = np.array([[float(e.eval_interval(64)) for e in row] for row in m])
        assert abs(exact - float(np.linalg.det(floats))) < 1e-10


def test_eval_interval_examples():
    iv = pp(1, -2).eval_interval(64)
    assert abs(float(iv) - 0.36338022763) < 1e-10
    tight = pp(1, -2).eval_interval(160)
    assert iv.lo <= tight.lo and tight.hi <= iv.hi
    assert pp(0).eval_interval(64) == Interval(F(0), F(0))
    assert abs(float(pp(0, 2).eval_interval(64)) - 0.63661977236) < 1e-10


@pytest.mark.parametrize("bits", [32, 64, 128])
def test_eval_interval_width_contract(bits):
    rng = random.Random(bits)
    for _ in range(10):
        p = pp(*(F(rng.randint(-10**6, 10**6), rng.randint(1, 999)) for _ in range(5)))
        iv = p.eval_interval(bits)
        value_bound = max(F(1), abs(iv.lo), abs(iv.hi))
        assert iv.width <= F(2) ** (1 - bits) * value_bound
        # the enclosure really contains the value: compare at higher precision
        tight = p.eval_interval(bits + 64)
        assert iv.lo <= tight.lo and tight.hi <= iv.hi


def test_eval_interval_survives_huge_cancellation():
    big = 10**40
    p = pp(F(big), F(0)) - pp(F(big) - F(1, 7))
    iv = p.eval_interval(64)
    assert iv.contains(F(1, 7))
    assert iv.width < F(1, 2**60)


def test_pi_bounds_enclose_pi():
    iv = pi_bounds(128)
    tighter = pi_bounds(256)
    assert iv.lo <= tighter.lo < tighter.hi <= iv.hi
    assert iv.width < F(1, 2**120)
    assert abs(float(iv) - math.pi) < 1e-15


def test_text_and_json_roundtrip():
    polys = [PiPoly(), pp("22/7"), pp(1, -2), pp(0, 0, "5/9"), pp(-1, "40/3", "-448/9", "512/9")]
    for p in polys:
        assert PiPoly.from_text(p.to_text()) == p
        assert PiPoly.from_json_obj(p.to_json_obj()) == p


def test_symgreen_det_1x1():
    entry = SymbolicGreen(pp(1), pp("-1/4"))
    result = sym_det([[entry]])
    assert result.g_coeff == pp(1)
    assert result.finite == pp("-1/4")


def test_symgreen_det_2x2_closed_row():
    g0 = SymbolicGreen(pp(1), pp("-1/4"))
    g1 = SymbolicGreen(pp(1), pp("-1/4", -1))
    result = sym_det([[g0, g1], [g1, g0]])
    # 2*(g_fin(0) - g_fin(1)) = 2/pi
    assert result.g_coeff == pp(0, 2)


def test_symgreen_det_zero_g_parts_degenerates():
    a = SymbolicGreen.finite_only(pp(1, -2))
    b = SymbolicGreen.finite_only(pp("-1/2", 2))
    result = sym_det([[a, b], [b, a]])
    assert result.g_coeff == PiPoly()
    assert result.finite == pp("3/4", -2)


def test_symgreen_det_rejects_mixed_g_parts():
    a = SymbolicGreen(pp(1), pp(1))
    b = SymbolicGreen(pp(2), pp(1))
    with pytest.raises(ConsistencyError):
        sym_det([[a, b], [b, a]])


def _random_sym_matrix(rng, n):
    entries = [
        [SymbolicGreen(pp(1), pp(rng.randint(-4, 4), rng.randint(-4, 4))) for _ in range(n)]
        for _ in range(n)
    ]
    return entries


def test_symgreen_substitution_limit():
    """det with GG -> X matches the symbolic pair to relative O(1/X)."""
    rng = random.Random(5)
    for n in (2, 3):
        m = _random_sym_matrix(rng, n)
        sd = sym_det(m)
        errors = []
        for x in (10**3, 10**6):
            substituted = [[e.substitute(x) for e in row] for row in m]
            full = float(det(substituted).eval_interval(96))
            linear = float((sd.g_coeff * x + sd.finite).eval_interval(96))
            scale = max(1.0, abs(full))
            errors.append(abs(full - linear) / scale)
        # determinant is exactly linear in GG: both errors are zero up to
        # evaluation noise, so the large-X error certainly does not grow
        assert errors[1] <= errors[0] + 1e-20
        assert errors[1] < 1e-12


def test_symgreen_no_quadratic_term():
    """Fit det(X) on two X values; the linear model must be exact."""
    rng = random.Random(9)
    m = _random_sym_matrix(rng, 3)
    x1, x2, x3 = 10**3, 10**6, 10**9
    vals = {}
    for x in (x1, x2, x3):
        substituted = [[e.substitute(x) for e in row] for row in m]
        vals[x] = det(substituted)
    # linear interpolation through (x1, x2) predicts x3 exactly in the ring
    slope = (vals[x2] - vals[x1]) * F(1, x2 - x1)
    predicted = vals[x1] + slope * F(x3 - x1)
    assert predicted == vals[x3]
