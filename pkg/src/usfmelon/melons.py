"""Watermelon Green matrices, determinant tables and asymptotic constants.

A k-leg watermelon connects the root string I = {(i, 1)}_{1<=i<=k} to the
endpoint string J = {(i+r, 1)}_{1<=i<=k} in the first row of the half
plane.  Its probability is a ratio of two Green determinants:

    P = det[ G(r + v_i - u_j; 1, 1) ] / det[ G(i - j; 1, 1) ],

with the shifts u_i = i, v_i = k + 1 - i.  The reversed v ordering encodes
the only planar (nested, non-crossing) pairing j_l <-> i_{k+1-l}, which
makes the surviving permutation the identity and the numerator determinant
the plain count of watermelon forests.

Open boundary: entries are exact elements of Q[1/pi] and the ratio is a
bona fide rational expression.  Closed boundary: every entry carries one
unit of the divergent constant GG = 2*G_{0,0}; numerator and denominator
determinants are both linear in GG and the probability is the ratio of
their GG-coefficients (the finite limit of the divergent sequence).  The
denominator GG-coefficient has a second, independent form det B_{k-1} in
terms of finite parts only; both routes are implemented.

The r -> infinity decay is P ~ C r^{-p} with p = k(k+1) (open) or k(k-1)
(closed) and the constants

    C_k_open   = prod_{i=0}^{k-1} i! (i+1)!  / (pi^k     * det table_open(k))
    C_k_closed = prod_{i=1}^{k-1} i! (i-1)!  / (pi^(k-1) * det B_{k-1}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ConsistencyError
from .exactnum import Interval, PiPoly, SymbolicGreen, det, sym_det
from .halfplane import green_closed, green_open
from .kernel import PotentialKernel, DEFAULT_KERNEL

__all__ = [
    "BOUNDARY_CONDITIONS",
    "WatermelonSpec",
    "ExactRatio",
    "green_matrix",
    "table_open",
    "table_closed",
    "closed_denominator_gcoeff",
    "watermelon_constant",
    "watermelon_prob_halfplane",
    "decay_exponent",
]

BOUNDARY_CONDITIONS = ("open", "closed")


def _check_bc(bc: str) -> str:
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"bc must be one of {BOUNDARY_CONDITIONS}, got {bc!r}")
    return bc


def decay_exponent(bc: str, k: int) -> int:
    """Theoretical power-law exponent: k(k+1) open, k(k-1) closed."""
    _check_bc(bc)
    return k * (k + 1) if bc == "open" else k * (k - 1)


@dataclass(frozen=True)
class WatermelonSpec:
    """k legs at horizontal separation r near an open or closed boundary."""

    k: int
    r: int
    bc: str

    def __post_init__(self) -> None:
        _check_bc(self.bc)
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.r <= self.k:
            raise ValueError("r must exceed k so the strings are disjoint")


@dataclass(frozen=True)
class ExactRatio:
    """Exact ratio numerator / (denominator * pi**pi_power).

    For the closed boundary both parts are SymbolicGreen with identical
    GG-structure and the numeric value is the ratio of GG-coefficients.
    """

    numerator: Union[PiPoly, SymbolicGreen]
    denominator: Union[PiPoly, SymbolicGreen]
    pi_power: int = 0

    def _parts(self) -> tuple[PiPoly, PiPoly]:
        num, den = self.numerator, self.denominator
        if isinstance(num, SymbolicGreen) != isinstance(den, SymbolicGreen):
            raise ConsistencyError("numerator and denominator GG-structure differ")
        if isinstance(num, SymbolicGreen):
            return num.g_coeff, den.g_coeff
        return num, den

    def value_interval(self, precision_bits: int = 128) -> Interval:
        from .exactnum import pi_bounds

        num, den = self._parts()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        ratio = num.eval_interval(precision_bits).divide(
            den.eval_interval(precision_bits)
        )
        if self.pi_power:
            pi = pi_bounds(precision_bits + 16)
            power = Interval(pi.lo**self.pi_power, pi.hi**self.pi_power)
            ratio = ratio.divide(power)
        return ratio

    def value(self) -> float:
        return float(self.value_interval())


def _melon_shifts(k: int) -> tuple[list[int], list[int]]:
    u = list(range(1, k + 1))
    v = [k + 1 - i for i in u]
    return u, v


def green_matrix(spec: WatermelonSpec, which: str, kernel: PotentialKernel | None = None):
    """Green matrix of a watermelon spec.

    ``which = "denominator"``: entry (i, j) = G(i - j; 1, 1).
    ``which = "numerator"``:   entry (i, j) = G(r + v_i - u_j; 1, 1).
    Open boundary yields PiPoly entries, closed yields SymbolicGreen.
    """
    if which not in ("numerator", "denominator"):
        raise ValueError("which must be 'numerator' or 'denominator'")
    kern = kernel or DEFAULT_KERNEL
    k = spec.k
    if which == "denominator":
        args = [[i - j for j in range(1, k + 1)] for i in range(1, k + 1)]
    else:
        u, v = _melon_shifts(k)
        args = [[spec.r + v[i] - u[j] for j in range(k)] for i in range(k)]
    if spec.bc == "open":
        return [[green_open(x, 1, 1, kern) for x in row] for row in args]
    return [[green_closed(x, 1, 1, kern) for x in row] for row in args]


def table_open(k: int, kernel: PotentialKernel | None = None) -> PiPoly:
    """Determinant of the k x k open-boundary denominator matrix."""
    if k < 1:
        raise ValueError("k must be positive")
    kern = kernel or DEFAULT_KERNEL
    matrix = [
        [green_open(i - j, 1, 1, kern) for j in range(1, k + 1)]
        for i in range(1, k + 1)
    ]
    return det(matrix)


def _g_fin(n: int, kern: PotentialKernel) -> PiPoly:
    return green_closed(n, 1, 1, kern).finite


def table_closed(k: int, kernel: PotentialKernel | None = None) -> PiPoly:
    """det B_{k-1}, the GG-coefficient of the closed denominator determinant.

    [B_s]_{ij} = g_fin(|i-j|) - g_fin(i) - g_fin(j) + g_fin(0) for
    1 <= i, j <= s, with det B_0 = 1 for k = 1.  Must agree with
    :func:`closed_denominator_gcoeff`, the direct symbolic-determinant
    route; the two are computed independently.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return PiPoly.rational(1)
    kern = kernel or DEFAULT_KERNEL
    s = k - 1
    g0 = _g_fin(0, kern)
    col = [_g_fin(i, kern) for i in range(s + 1)]
    matrix = [
        [col[abs(i - j)] - col[i] - col[j] + g0 for j in range(1, s + 1)]
        for i in range(1, s + 1)
    ]
    return det(matrix)


def closed_denominator_gcoeff(k: int, kernel: PotentialKernel | None = None) -> PiPoly:
    """GG-coefficient of det[G_cl(i-j; 1, 1)] via the symbolic determinant."""
    if k < 1:
        raise ValueError("k must be positive")
    kern = kernel or DEFAULT_KERNEL
    matrix = [
        [green_closed(i - j, 1, 1, kern) for j in range(1, k + 1)]
        for i in range(1, k + 1)
    ]
    return sym_det(matrix).g_coeff


def _factorial_product(bc: str, k: int) -> int:
    if bc == "open":
        return math.prod(math.factorial(i) * math.factorial(i + 1) for i in range(k))
    return math.prod(
        math.factorial(i) * math.factorial(i - 1) for i in range(1, k)
    )


def watermelon_constant(
    bc: str, k: int, kernel: PotentialKernel | None = None
) -> tuple[ExactRatio, float]:
    """Asymptotic amplitude C_k for the chosen boundary, exact and numeric."""
    _check_bc(bc)
    if k < 1:
        raise ValueError("k must be positive")
    if bc == "open":
        table = table_open(k, kernel)
        pi_power = k
    else:
        table = table_closed(k, kernel)
        pi_power = k - 1
    ratio = ExactRatio(
        numerator=PiPoly.rational(_factorial_product(bc, k)),
        denominator=table,
        pi_power=pi_power,
    )
    return ratio, ratio.value()


def watermelon_prob_halfplane(
    spec: WatermelonSpec, kernel: PotentialKernel | None = None
) -> tuple[ExactRatio, float]:
    """Exact half-plane watermelon probability at finite separation r.

    Open: ratio of two PiPoly determinants, strictly inside (0, 1).
    Closed: ratio of the GG-coefficients of the two symbolic determinants,
    in (0, 1].  A value escaping [0, 1] (beyond certified-interval slack)
    means an internal contradiction and raises :class:`ConsistencyError`.
    """
    kern = kernel or DEFAULT_KERNEL
    num = green_matrix(spec, "numerator", kern)
    den = green_matrix(spec, "denominator", kern)
    if spec.bc == "open":
        ratio = ExactRatio(det(num), det(den))
    else:
        ratio = ExactRatio(sym_det(num), sym_det(den))
    enclosure = ratio.value_interval(128)
    if enclosure.hi < 0 or enclosure.lo > 1:
        raise ConsistencyError(
            f"watermelon probability {float(enclosure)} escapes [0, 1] "
            f"for {spec}"
        )
    return ratio, float(enclosure)
