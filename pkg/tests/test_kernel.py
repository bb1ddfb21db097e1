"""Exact recursion vs quadrature oracle vs asymptotic expansion."""

import math
from fractions import Fraction as F

import pytest

from usfmelon import PiPoly, QuadratureError, kernel_asymptotic, kernel_exact, kernel_numeric

from conftest import pp


def test_seed_values():
    assert kernel_exact(0, 0) == PiPoly()
    assert kernel_exact(1, 0) == pp("-1/4")
    assert kernel_exact(1, 1) == pp(0, -1)


def test_diagonal_closed_form_against_quadrature():
    # the diagonal seed of the recursion is validated against the integral
    for n in (1, 2, 3, 5):
        exact = -sum(F(1, 2 * j - 1) for j in range(1, n + 1))
        assert kernel_exact(n, n) == pp(0, exact)
        numeric = kernel_numeric(n, n)
        assert abs(float(kernel_exact(n, n).eval_interval(64)) - numeric) < 1e-10


def test_defect_equation():
    lhs = kernel_exact(0, 0) * 4 - kernel_exact(1, 0) * 4
    assert lhs == pp(1)


def test_harmonicity_exact_up_to_30():
    for m in range(31):
        for n in range(31):
            if (m, n) == (0, 0):
                continue
            lhs = kernel_exact(m, n) * 4
            rhs = (
                kernel_exact(m + 1, n)
                + kernel_exact(m - 1, n)
                + kernel_exact(m, n + 1)
                + kernel_exact(m, n - 1)
            )
            assert lhs == rhs, (m, n)


def test_full_symmetry_group():
    for m, n in [(3, 1), (5, 2), (7, 0), (4, 4)]:
        value = kernel_exact(m, n)
        assert kernel_exact(n, m) == value
        assert kernel_exact(-m, n) == value
        assert kernel_exact(m, -n) == value
        assert kernel_exact(-n, -m) == value


def test_numeric_examples():
    assert abs(kernel_numeric(0, 0)) < 1e-8
    assert abs(kernel_numeric(1, 0) + 0.25) < 1e-8
    expected = -(1.0 + 1.0 / 3.0) / math.pi
    assert abs(kernel_numeric(2, 2) - expected) < 1e-8


def test_numeric_oracle_agreement_small_grid():
    for m in range(4):
        for n in range(m + 1):
            exact = kernel_exact(m, n)
            value = float(exact.eval_interval(64)) if exact else 0.0
            assert abs(value - kernel_numeric(m, n)) < 1e-9, (m, n)


def test_numeric_reports_nonconvergence():
    with pytest.raises(QuadratureError):
        kernel_numeric(12, 9, quadrature_order=4, tol=1e-13, max_order=16)


def test_asymptotic_at_r1_is_constant_term():
    expected = -(np_euler() / 2 + 0.75 * math.log(2)) / math.pi + 1 / (24 * math.pi)
    assert abs(kernel_asymptotic(1) - expected) < 1e-15


def np_euler():
    import numpy as np

    return float(np.euler_gamma)


def _asym_error(r):
    exact = float(kernel_exact(r, 0).eval_interval(160))
    return abs(exact - kernel_asymptotic(r))


def test_asymptotic_error_at_10():
    assert _asym_error(10) <= 0.05 / 10**4


def test_asymptotic_error_scaling_to_40():
    e10 = _asym_error(10)
    e40 = _asym_error(40)
    assert e40 <= e10 / 256 * 1.25
