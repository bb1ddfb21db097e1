"""Potential-kernel increments of the simple random walk on Z^2.

``g(m, n)`` is the finite voltage drop between two lattice sites at offset
(m, n) when a unit current is injected into one of them on the infinite
lattice, i.e. the limit of G(x1, x2) - G(x2, x2) over wired exhaustions.
It is the integral

    g(m, n) = (1 / 2 pi^2) int_0^pi int_0^pi
              (cos(m a) cos(n b) - 1) / (2 - cos a - cos b)  da db,

lattice-harmonic away from the origin with unit defect there, and its values
lie in Q + Q/pi.

Three independent routes are provided:

* :class:`PotentialKernel` - exact values by the McCrea-Whipple recursion
  (seeds g(0,0)=0, g(1,0)=-1/4 forced by the defect equation, diagonal
  g(n,n) = -(1/pi) * sum_{j<=n} 1/(2j-1), harmonic fill inward);
* :func:`kernel_numeric` - adaptive Gauss-Legendre quadrature of the double
  integral, used as the oracle that validates the recursion seeds;
* :func:`kernel_asymptotic` - the large-distance expansion along an axis.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import QuadratureError
from .exactnum import PiPoly

__all__ = [
    "PotentialKernel",
    "DEFAULT_KERNEL",
    "kernel_exact",
    "kernel_numeric",
    "kernel_asymptotic",
]


class PotentialKernel:
    """Memoized exact values g(m, n), grown octant-by-octant on demand.

    Only the octant 0 <= n <= m is stored; lookups apply the full symmetry
    group g(m, n) = g(n, m) = g(+-m, +-n).  The table grows monotonically
    (single writer); reads of already-built entries are safe to share.
    """

    def __init__(self) -> None:
        self._table: dict[tuple[int, int], PiPoly] = {
            (0, 0): PiPoly(),
            (1, 0): PiPoly.rational(Fraction(-1, 4)),
            (1, 1): PiPoly.term(-1, 1),
        }
        self._built = 1  # all columns m' <= _built are complete
        self._diag_sum = Fraction(-1)  # -sum 1/(2j-1) for j <= _built

    @property
    def max_built(self) -> int:
        return self._built

    def ensure(self, m: int) -> None:
        """Extend the table so every entry with max coordinate <= m exists."""
        table = self._table
        while self._built < m:
            col = self._built + 1  # seeds cover column 1, so col >= 2 here
            self._diag_sum -= Fraction(1, 2 * col - 1)
            table[(col, col)] = PiPoly.term(self._diag_sum, 1)
            # harmonicity at the diagonal point (col-1, col-1)
            table[(col, col - 1)] = (
                table[(col - 1, col - 1)] * 2 - table[(col - 1, col - 2)]
            )
            # harmonicity centered at (col-1, n) solves for g(col, n)
            prev, cur = col - 2, col - 1
            for n in range(col - 2, -1, -1):
                below = table[(cur, 1)] if n == 0 else table[(cur, n - 1)]
                table[(col, n)] = (
                    table[(cur, n)] * 4
                    - table[(prev, n)]
                    - table[(cur, n + 1)]
                    - below
                )
            self._built = col

    def exact(self, m: int, n: int) -> PiPoly:
        """Exact g(m, n) as an element of Q + Q/pi."""
        m, n = abs(m), abs(n)
        if n > m:
            m, n = n, m
        self.ensure(m)
        return self._table[(m, n)]

    def items(self, max_coord: int) -> Iterator[tuple[int, int, PiPoly]]:
        """Yield (m, n, g(m, n)) over the octant 0 <= n <= m <= max_coord."""
        self.ensure(max_coord)
        for m in range(max_coord + 1):
            for n in range(min(m, max_coord) + 1):
                yield m, n, self._table[(m, n)]


DEFAULT_KERNEL = PotentialKernel()


def kernel_exact(m: int, n: int, kernel: PotentialKernel | None = None) -> PiPoly:
    """Exact potential-kernel increment g(m, n) from the shared table."""
    return (kernel or DEFAULT_KERNEL).exact(m, n)


def _quad_patches(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _integrand(alpha: np.ndarray, beta: np.ndarray, m: int, n: int) -> np.ndarray:
    return (np.cos(m * alpha) * np.cos(n * beta) - 1.0) / (
        2.0 - np.cos(alpha) - np.cos(beta)
    )


def _polar_value(m: int, n: int, order: int) -> float:
    """Quadrature of the g(m, n) double integral at a fixed order.

    The square [0, pi]^2 is covered by two polar patches around the corner
    singularity at the origin.  In polar coordinates both the numerator and
    the denominator vanish to second order there, so the transformed
    integrand (including the radial Jacobian) is analytic on each closed
    patch and tensor Gauss-Legendre converges exponentially.
    """
    t, wt = _quad_patches(order)
    s01 = 0.5 * (t + 1.0)  # nodes on [0, 1]
    ws = 0.5 * wt
    total = 0.0
    quarter = np.pi / 4.0
    for lo in (0.0, quarter):
        theta = lo + quarter * s01
        wtheta = quarter * ws
        rmax = np.pi / np.cos(theta) if lo == 0.0 else np.pi / np.sin(theta)
        # radial nodes r = rmax * s, Jacobian rmax^2 * s
        r = rmax[:, None] * s01[None, :]
        alpha = r * np.cos(theta)[:, None]
        beta = r * np.sin(theta)[:, None]
        vals = _integrand(alpha, beta, m, n) * r
        inner = (vals * ws[None, :]).sum(axis=1) * rmax
        total += float((inner * wtheta).sum())
    return total / (2.0 * np.pi**2)


def kernel_numeric(
    m: int,
    n: int,
    quadrature_order: int = 48,
    tol: float = 1e-9,
    max_order: int = 168,
) -> float:
    """Numeric g(m, n) by adaptive refinement of the double integral.

    Successive orders are compared until they agree within ``tol``;
    :class:`QuadratureError` is raised if the budget ``max_order`` is hit
    first.  Independent of the exact recursion, so the two routes
    cross-validate each other.
    """
    if quadrature_order < 4:
        raise ValueError("quadrature_order must be at least 4")
    order = max(quadrature_order, 4 * max(abs(m), abs(n), 1))
    prev = _polar_value(m, n, order)
    while order + 12 <= max_order:
        order += 12
        cur = _polar_value(m, n, order)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"quadrature for g({m},{n}) did not converge to {tol:g} "
        f"within order {max_order}"
    )


def kernel_asymptotic(r: float) -> float:
    """Large-r expansion of g(r, 0) along a lattice axis.

    Returns -(1/2 pi) ln r - (1/pi)(gamma/2 + (3/4) ln 2) + 1/(24 pi r^2),
    with gamma the Euler-Mascheroni constant; the truncation error is
    O(1/r^4).
    """
    if r < 1:
        raise ValueError("asymptotic form requires r >= 1")
    return (
        -np.log(r) / (2.0 * np.pi)
        - (np.euler_gamma / 2.0 + 0.75 * np.log(2.0)) / np.pi
        + 1.0 / (24.0 * np.pi * r * r)
    )
