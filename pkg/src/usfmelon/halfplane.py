"""Half-plane lattice Green functions by the image method, and f+- sums.

The half-plane Green functions with Dirichlet (open) or Neumann (closed)
lowest row follow from the infinite-lattice potential kernel by reflecting
the source across y = 0 or y = 1/2:

    G_op(x; y1, y2)  = g(x, y1 - y2) - g(x, y1 + y2)
    G_cl(x; y1, y2)  = GG + g(x, y1 - y2) + g(x, y1 + y2 - 1)

where GG = 2*G_{0,0} is the divergent on-site constant, kept symbolic.

For the first row (y1 = y2 = 1), both functions also admit closed finite
sums over the quantities f_-(m), f_+(m), which are special hypergeometric
values reducible to Gamma-function sums at half-integers.  After resolving
every Gamma ratio to rational * sqrt(pi)^{+-1} analytically, each f value
lands in Q + Q/pi, so the whole module stays inside the exact ring.  The
two routes (kernel recursion and f+- sums) are independent and must agree
exactly; tests enforce this.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exactnum import PiPoly, SymbolicGreen
from .kernel import PotentialKernel, DEFAULT_KERNEL

__all__ = [
    "f_minus",
    "f_plus",
    "green_open",
    "green_closed",
    "green_open_row1",
    "g_fin_closed_row1",
]


def _gamma_half(k: int) -> tuple[Fraction, int]:
    """Gamma(k/2) for positive integer k, as (rational, power of sqrt(pi)).

    Even k: Gamma(k/2) = (k/2 - 1)!.  Odd k = 2n + 1:
    Gamma(n + 1/2) = (2n)! / (4^n n!) * sqrt(pi).
    """
    if k <= 0:
        raise ValueError("argument must be a positive half-integer doubled")
    if k % 2 == 0:
        return Fraction(math.factorial(k // 2 - 1)), 0
    n = (k - 1) // 2
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), 1


def _sqrtpi_combo(rational_part: Fraction, pi_inv_part: Fraction) -> PiPoly:
    return PiPoly((rational_part, pi_inv_part))


def f_minus(m: int) -> PiPoly:
    """f_-(m) as an exact element of Q + Q/pi.

    For m >= 1 this is (1 / 2 sqrt(pi)) * sum_{l=0}^{m-1} (-1)^l C(m-1, l)
    Gamma(l/2 + 1/2) / Gamma(l/2 + 2); each Gamma ratio carries sqrt(pi) to
    the power +-1, which the overall 1/sqrt(pi) turns into pi^0 or pi^-1.
    The m = 0 value is 1 + 2/pi.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return PiPoly((1, 2))
    rational = Fraction(0)
    pi_inv = Fraction(0)
    for l in range(m):
        num, pn = _gamma_half(l + 1)  # Gamma(l/2 + 1/2)
        den, pd = _gamma_half(l + 4)  # Gamma(l/2 + 2)
        coeff = Fraction((-1) ** l) * math.comb(m - 1, l) * num / den
        power = pn - pd - 1  # includes the prefactor 1/sqrt(pi)
        if power == 0:
            rational += coeff / 2
        elif power == -2:
            pi_inv += coeff / 2
        else:  # pragma: no cover - half-integer bookkeeping cannot reach here
            raise AssertionError(power)
    return _sqrtpi_combo(rational, pi_inv)


def f_plus(m: int) -> PiPoly:
    """f_+(m) as an exact element of Q + Q/pi.

    (1 / 4 sqrt(pi)) * sum_{l=0}^{m} (-1)^l C(m, l)
    Gamma(l/2 + 1/2) / Gamma(l/2 + 1); in particular f_+(0) = 1/4.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    rational = Fraction(0)
    pi_inv = Fraction(0)
    for l in range(m + 1):
        num, pn = _gamma_half(l + 1)  # Gamma(l/2 + 1/2)
        den, pd = _gamma_half(l + 2)  # Gamma(l/2 + 1)
        coeff = Fraction((-1) ** l) * math.comb(m, l) * num / den
        power = pn - pd - 1
        if power == 0:
            rational += coeff / 4
        elif power == -2:
            pi_inv += coeff / 4
        else:  # pragma: no cover
            raise AssertionError(power)
    return _sqrtpi_combo(rational, pi_inv)


def f_pm(sign: str, m: int) -> PiPoly:
    """Dispatch on sign: ``"+"`` -> f_+(m), ``"-"`` -> f_-(m)."""
    if sign == "+":
        return f_plus(m)
    if sign == "-":
        return f_minus(m)
    raise ValueError("sign must be '+' or '-'")


def green_open(
    x: int, y1: int, y2: int, kernel: PotentialKernel | None = None
) -> PiPoly:
    """Open-boundary Green function G_op(x; y1, y2) = g(x, y1-y2) - g(x, y1+y2).

    Vanishes whenever y1 = 0 or y2 = 0: the lowest row is Dirichlet.
    """
    if y1 < 0 or y2 < 0:
        raise ValueError("heights must be non-negative")
    kern = kernel or DEFAULT_KERNEL
    return kern.exact(x, y1 - y2) - kern.exact(x, y1 + y2)


def green_closed(
    x: int, y1: int, y2: int, kernel: PotentialKernel | None = None
) -> SymbolicGreen:
    """Closed-boundary Green function GG + g(x, y1-y2) + g(x, y1+y2-1).

    The finite part satisfies the reflection identity across y = 1/2 (no
    vertical current through the wall below the first row).
    """
    if y1 < 1 or y2 < 1:
        raise ValueError("heights must be at least 1 for the closed boundary")
    kern = kernel or DEFAULT_KERNEL
    finite = kern.exact(x, y1 - y2) + kern.exact(x, y1 + y2 - 1)
    return SymbolicGreen(PiPoly((1,)), finite)


def green_open_row1(n: int) -> PiPoly:
    """G_op(n; 1, 1) from the finite double sum over f_-.

    Independent of the kernel recursion; must coincide with
    ``green_open(n, 1, 1)`` exactly.
    """
    n = abs(n)
    total = PiPoly.rational(2) if n == 0 else PiPoly()
    if n == 1:
        total = total - PiPoly.rational(Fraction(1, 2))
    needed = [f_minus(i) for i in range(n + 1)]
    for s in range(n + 1):
        for r in range(s + 1):
            coeff = Fraction((-1) ** (r + s)) * math.comb(2 * n, 2 * s) * math.comb(s, r)
            total = total - needed[n - s + r] * coeff
    return total


def g_fin_closed_row1(n: int) -> PiPoly:
    """Finite part of G_cl(n; 1, 1) from the finite double sum over f_+.

    Independent of the kernel recursion; must coincide with the finite part
    of ``green_closed(n, 1, 1)`` exactly.
    """
    n = abs(n)
    fp = [f_plus(i) for i in range(n + 2)]
    total = PiPoly.rational(Fraction(-1, 2)) if n == 0 else PiPoly()
    total = total + fp[n]
    for s in range(n):
        total = total - fp[s]
    for s in range(1, n + 1):
        for r in range(s):
            coeff = (
                Fraction((-1) ** (r + s - 1))
                * math.comb(2 * n, 2 * s)
                * math.comb(s - 1, r)
            )
            bracket = fp[n + r - s] * 2 - fp[n + r - s + 1]
            total = total - bracket * coeff
    return total
