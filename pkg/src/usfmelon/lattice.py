"""Finite rectangular lattices: sparse Laplacians, Green solves, probabilities.

Ground truth for the half-plane formulas.  A :class:`RectDomain` is a
finite window of the lattice whose outer frame is wired (every step off
the stored grid is absorbed by a Dirichlet boundary site).  The bottom of
the window models the half-plane boundary:

* ``bc="open"``   - sites (x, y), 0 <= x < width, 0 <= y < height; the row
  y = 0 is Dirichlet, rows 1 .. height-1 are interior, every interior site
  has 4 incident edges;
* ``bc="closed"`` - sites (x, y), 1 <= y <= height; there is no edge below
  the first row, so its sites have 3 incident edges;
* ``bc="bulk"``   - like closed but with the edge below the first row
  restored (degree 4 everywhere); all four sides wired.  Used only for
  full-plane checks such as :func:`diag_green_drift`.

The watermelon strings I = {(i, 1)} and J = {(i+r, 1)} are centered
horizontally; probabilities come from Green columns of one sparse
factorization via the determinant ratio det G_J^I / det G_I^I with the
nested pairing ordering (rows of the numerator indexed by reversed J).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .errors import ConsistencyError

Site = tuple[int, int]

__all__ = [
    "RectDomain",
    "SparseLaplacian",
    "assemble_laplacian",
    "green_solve",
    "melon_strings",
    "watermelon_prob_finite",
    "convergence_sweep",
    "diag_green_drift",
]

_LATTICE_BCS = ("open", "closed", "bulk")


@dataclass(frozen=True)
class RectDomain:
    """Finite rectangle with a wired frame and an open/closed bottom row."""

    width: int
    height: int
    bc: str

    def __post_init__(self) -> None:
        if self.bc not in _LATTICE_BCS:
            raise ValueError(f"bc must be one of {_LATTICE_BCS}, got {self.bc!r}")
        if self.width < 1 or self.height < 2:
            raise ValueError("domain too small to have interior sites")

    @classmethod
    def standard(cls, size: int, bc: str) -> "RectDomain":
        """Sweep geometry: width = size, height about half of it.

        The watermelon hugs the bottom boundary, so vertical extent buys
        less accuracy than horizontal extent; halving it halves solve cost.
        """
        return cls(width=size, height=max(4, size // 2), bc=bc)

    @property
    def y_range(self) -> range:
        """Interior rows."""
        if self.bc == "open":
            return range(1, self.height)
        return range(1, self.height + 1)

    def interior_sites(self) -> Iterable[Site]:
        for y in self.y_range:
            for x in range(self.width):
                yield (x, y)

    def is_interior(self, site: Site) -> bool:
        x, y = site
        return 0 <= x < self.width and y in self.y_range

    def degree(self, site: Site) -> int:
        if self.bc == "closed" and site[1] == 1:
            return 3
        return 4

    def neighbors(self, site: Site) -> list[Site]:
        """Lattice neighbors, including Dirichlet ones outside the interior."""
        x, y = site
        out = [(x - 1, y), (x + 1, y), (x, y + 1)]
        if not (self.bc == "closed" and y == 1):
            out.append((x, y - 1))
        return out


class SparseLaplacian:
    """Reduced graph Laplacian over the non-root interior sites of a domain.

    Symmetric positive definite: the diagonal carries the full lattice
    degree while off-diagonal -1 entries only appear between retained
    sites, so every edge to a Dirichlet or root site adds mass.  One LU
    factorization is shared by all right-hand sides.
    """

    def __init__(self, domain: RectDomain, extra_roots: Sequence[Site] = ()) -> None:
        roots = set(extra_roots)
        for site in roots:
            if not domain.is_interior(site):
                raise ValueError(f"root {site} is not an interior site")
        self.domain = domain
        self.roots = frozenset(roots)
        self.sites: list[Site] = [
            s for s in domain.interior_sites() if s not in roots
        ]
        self.index = {s: i for i, s in enumerate(self.sites)}
        n = len(self.sites)
        if n == 0:
            raise ValueError("no unknowns left after removing roots")
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        for i, site in enumerate(self.sites):
            rows.append(i)
            cols.append(i)
            vals.append(float(domain.degree(site)))
            for nb in domain.neighbors(site):
                j = self.index.get(nb)
                if j is not None:
                    rows.append(i)
                    cols.append(j)
                    vals.append(-1.0)
        self.matrix = csc_matrix((vals, (rows, cols)), shape=(n, n))
        self._factor = None

    @property
    def dimension(self) -> int:
        return len(self.sites)

    def factor(self):
        if self._factor is None:
            self._factor = splu(self.matrix.tocsc())
        return self._factor

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x = self.factor().solve(rhs)
        residual = np.linalg.norm(self.matrix @ x - rhs)
        scale = np.linalg.norm(rhs)
        if residual > 1e-12 * max(scale, 1.0):
            # one step of iterative refinement before giving up
            x = x + self.factor().solve(rhs - self.matrix @ x)
            residual = np.linalg.norm(self.matrix @ x - rhs)
            if residual > 1e-12 * max(scale, 1.0):
                raise ConsistencyError(
                    f"linear solve residual {residual:.3e} exceeds tolerance"
                )
        return x


def assemble_laplacian(
    domain: RectDomain, extra_roots: Sequence[Site] = ()
) -> SparseLaplacian:
    """Laplacian with rows/columns for Dirichlet sites and roots removed."""
    return SparseLaplacian(domain, extra_roots)


def green_solve(lap: SparseLaplacian, source: Site) -> np.ndarray:
    """Green column G[., source]: solves Laplacian * g = e_source.

    Returns the vector over ``lap.sites``; entries are strictly positive on
    the connected interior.
    """
    idx = lap.index.get(source)
    if idx is None:
        raise ValueError(f"source {source} is not an unknown of this system")
    rhs = np.zeros(lap.dimension)
    rhs[idx] = 1.0
    return lap.solve(rhs)


def melon_strings(domain: RectDomain, k: int, r: int) -> tuple[list[Site], list[Site]]:
    """Centered root string I and endpoint string J in the first row.

    Requires at least one interior column of margin on each side.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if r < 0:
        raise ValueError("r must be non-negative")
    if domain.bc == "bulk":
        raise ValueError("watermelon strings require an open or closed boundary")
    span = k + r
    x0 = (domain.width - span) // 2
    if x0 < 1 or x0 + span > domain.width - 1:
        raise ValueError(
            f"strings (k={k}, r={r}) do not fit in width {domain.width} "
            "with margin"
        )
    eye = [(x0 + i, 1) for i in range(k)]
    jay = [(x0 + i + r, 1) for i in range(k)]
    return eye, jay


def watermelon_prob_finite(domain: RectDomain, k: int, r: int) -> float:
    """Finite-volume watermelon probability det G_J^I / det G_I^I.

    Green columns are taken from one factorization of the domain Laplacian
    (roots not removed; the strings are plain interior sites).  The r = 0
    degenerate case (J = I) is exactly 1.  Values escaping [0, 1] beyond
    solver slack raise :class:`ConsistencyError`.
    """
    if r == 0:
        return 1.0
    if r <= k:
        raise ValueError("strings overlap: need r > k (or r = 0)")
    eye, jay = melon_strings(domain, k, r)
    lap = assemble_laplacian(domain)
    columns = [green_solve(lap, src) for src in eye]
    g_ii = np.array(
        [[col[lap.index[site]] for col in columns] for site in eye]
    )
    jay_rev = jay[::-1]  # nested pairing: row a is j_{k+1-a}
    g_ji = np.array(
        [[col[lap.index[site]] for col in columns] for site in jay_rev]
    )
    prob = float(np.linalg.det(g_ji) / np.linalg.det(g_ii))
    if not -1e-10 <= prob <= 1.0 + 1e-10:
        raise ConsistencyError(
            f"finite-volume probability {prob} escapes [0, 1] "
            f"(bc={domain.bc}, k={k}, r={r}, box={domain.width}x{domain.height})"
        )
    return prob


def convergence_sweep(
    bc: str, k: int, r: int, sizes: Sequence[int]
) -> list[tuple[int, float]]:
    """Probabilities on a nested family of boxes (width = size).

    Stabilization should be monotone; because small boxes sit at solver
    tolerance, a violation is reported as a warning rather than an error.
    """
    rows: list[tuple[int, float]] = []
    for size in sizes:
        domain = RectDomain.standard(size, bc)
        rows.append((size, watermelon_prob_finite(domain, k, r)))
    deltas = [abs(b[1] - a[1]) for a, b in zip(rows, rows[1:])]
    for d1, d2 in zip(deltas, deltas[1:]):
        if d2 > d1 * 1.05 and d2 > 1e-12:
            warnings.warn(
                f"convergence sweep not monotone: deltas {deltas}",
                stacklevel=2,
            )
            break
    return rows


def diag_green_drift(
    sizes: Sequence[int], x: Site, y: Site
) -> tuple[list[tuple[int, float]], float]:
    """|G_xx - G_yy| on growing wired squares of the full plane.

    ``x`` and ``y`` are offsets from the box center.  Translation
    invariance of the on-site Green value emerges only in the limit; the
    difference must shrink like the inverse boundary size.  Returns the
    table and the fitted log-log decay rate (positive means decay).
    """
    rows: list[tuple[int, float]] = []
    for size in sizes:
        domain = RectDomain(width=size, height=size, bc="bulk")
        cx = domain.width // 2
        cy = (domain.height + 1) // 2
        sx = (cx + x[0], cy + x[1])
        sy = (cx + y[0], cy + y[1])
        for s in (sx, sy):
            if not domain.is_interior(s):
                raise ValueError(f"site {s} outside the {size}x{size} box")
        lap = assemble_laplacian(domain)
        gxx = green_solve(lap, sx)[lap.index[sx]]
        gyy = green_solve(lap, sy)[lap.index[sy]]
        rows.append((size, abs(float(gxx - gyy))))
    rate = 0.0
    pts = [(s, d) for s, d in rows if d > 0]
    if len(pts) >= 2:
        logs = np.log([s for s, _ in pts])
        logd = np.log([d for _, d in pts])
        rate = -float(np.polyfit(logs, logd, 1)[0])
    return rows, rate
