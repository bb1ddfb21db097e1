"""Exhaustive spanning-forest enumeration on tiny graphs.

The auditable oracle behind every determinant identity in the package: on
graphs with at most a dozen non-boundary vertices, all subsets of edges are
searched (with cycle and two-root pruning) and forests are counted
directly.  A forest rooted to R means: acyclic, and every connected
component contains exactly one vertex of R.

:func:`forests_bruteforce` counts forests rooted to boundary + I and
classifies them by which root each endpoint j_l reaches.  It also asserts,
exactly and in integers,

* the matrix-tree identity  det(Laplacian with boundary+I removed) = count,
* the all-minors identity   det Delta^{bar J}_{bar I} =
  (-1)^{sum I + sum J} * sum_sigma sgn(sigma) * Z(I sigma(J) | boundary),

raising :class:`ConsistencyError` on any mismatch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .errors import ConsistencyError

Vertex = Hashable

__all__ = ["TinyGraph", "ForestCounts", "forests_bruteforce", "int_det"]

MAX_INTERIOR = 12


@dataclass(frozen=True)
class TinyGraph:
    """Explicit graph with designated boundary and watermelon strings.

    Unit edge weights; no self-loops or parallel edges.  ``eye`` and
    ``jay`` are the root and endpoint strings (equal length, disjoint,
    non-boundary).
    """

    vertices: tuple
    edges: tuple
    boundary: tuple = ()
    eye: tuple = ()
    jay: tuple = ()

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertices")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loop")
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a}, {b}) leaves the vertex set")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError("parallel edge")
            seen.add(key)
        interior = vs - set(self.boundary)
        if len(interior) > MAX_INTERIOR:
            raise ValueError(
                f"{len(interior)} non-boundary vertices exceed the "
                f"enumeration bound {MAX_INTERIOR}"
            )
        if len(self.eye) != len(self.jay):
            raise ValueError("strings must have equal length")
        strings = set(self.eye) | set(self.jay)
        if strings & set(self.boundary):
            raise ValueError("strings must avoid the boundary")
        if len(set(self.eye) & set(self.jay)) not in (0, len(self.eye)):
            raise ValueError("strings must be disjoint or identical")

    @property
    def interior(self) -> list:
        """Non-boundary vertices in declaration order."""
        bset = set(self.boundary)
        return [v for v in self.vertices if v not in bset]

    def laplacian(self, removed: Sequence[Vertex]) -> list[list[int]]:
        """Integer Laplacian restricted to vertices outside ``removed``.

        Diagonals count all incident edges; off-diagonals are -1 per edge
        between retained vertices.
        """
        gone = set(removed)
        kept = [v for v in self.vertices if v not in gone]
        idx = {v: i for i, v in enumerate(kept)}
        n = len(kept)
        mat = [[0] * n for _ in range(n)]
        for a, b in self.edges:
            for u, w in ((a, b), (b, a)):
                i = idx.get(u)
                if i is None:
                    continue
                mat[i][i] += 1
                j = idx.get(w)
                if j is not None:
                    mat[i][j] -= 1
        return mat


@dataclass
class ForestCounts:
    """Enumeration result for one TinyGraph."""

    z_rooted: int
    by_assignment: dict[tuple[int, ...], int] = field(default_factory=dict)
    # by_assignment[a] counts forests in which endpoint jay[l] is rooted to
    # eye[a[l]]; keys are exactly the bijective assignments that occurred.

    def signed_pairing_sum(self) -> int:
        total = 0
        for assignment, count in self.by_assignment.items():
            total += _perm_sign(assignment) * count
        return total


def _perm_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free via rational elimination)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in matrix]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    value = sign * result
    if value.denominator != 1:
        raise AssertionError("integer determinant came out non-integer")
    return int(value)


class _DSU:
    """Union-find with rollback; tracks the root vertex of each component."""

    def __init__(self, n: int, root_mark: list[int]) -> None:
        self.parent = list(range(n))
        self.size = [1] * n
        self.root_of = root_mark[:]  # index of the R-vertex in the component, or -1
        self.trail: list[tuple[int, int, int]] = []

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        """Merge; returns False (no-op) if both components are rooted."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise AssertionError("cycle should have been filtered earlier")
        if self.root_of[ra] >= 0 and self.root_of[rb] >= 0:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.trail.append((rb, ra, self.root_of[ra]))
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.root_of[rb] >= 0:
            self.root_of[ra] = self.root_of[rb]
        return True

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            rb, ra, old_root = self.trail.pop()
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]
            self.root_of[ra] = old_root


def forests_bruteforce(g: TinyGraph) -> ForestCounts:
    """Count spanning forests rooted to boundary + I, classified by pairing.

    Also verifies the matrix-tree and all-minors determinant identities
    against the enumeration, raising :class:`ConsistencyError` on mismatch.
    """
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    roots = list(dict.fromkeys(tuple(g.boundary) + tuple(g.eye)))
    if not roots:
        raise ValueError("boundary + I must be non-empty")
    root_mark = [-1] * n
    for r_i, v in enumerate(roots):
        root_mark[idx[v]] = r_i
    edges = [(idx[a], idx[b]) for a, b in g.edges]
    need = n - len(roots)  # number of edges in any valid forest
    jay_idx = [idx[v] for v in g.jay]
    eye_pos = {idx[v]: a for a, v in enumerate(g.eye)}

    dsu = _DSU(n, root_mark)
    counts = ForestCounts(z_rooted=0)
    k = len(g.eye)

    def record() -> None:
        counts.z_rooted += 1
        if not k:
            return
        assignment = []
        for j in jay_idx:
            root_vertex_pos = dsu.root_of[dsu.find(j)]
            root_vertex = idx[roots[root_vertex_pos]] if root_vertex_pos >= 0 else -1
            a = eye_pos.get(root_vertex, -1)
            if a < 0:
                return  # endpoint rooted to the boundary: no pairing
            assignment.append(a)
        if len(set(assignment)) == k:
            key = tuple(assignment)
            counts.by_assignment[key] = counts.by_assignment.get(key, 0) + 1

    def recurse(edge_pos: int, included: int) -> None:
        if included == need:
            record()
            return
        if edge_pos == len(edges):
            return
        if included + (len(edges) - edge_pos) < need:
            return  # cannot reach a spanning forest any more
        a, b = edges[edge_pos]
        ra, rb = dsu.find(a), dsu.find(b)
        if ra != rb and not (dsu.root_of[ra] >= 0 and dsu.root_of[rb] >= 0):
            mark = len(dsu.trail)
            dsu.union(a, b)
            recurse(edge_pos + 1, included + 1)
            dsu.rollback(mark)
        recurse(edge_pos + 1, included)

    recurse(0, 0)

    # matrix-tree identity against the enumeration
    mtt = int_det(g.laplacian(removed=roots))
    if mtt != counts.z_rooted:
        raise ConsistencyError(
            f"matrix-tree mismatch: det={mtt}, enumeration={counts.z_rooted}"
        )

    # all-minors identity: minor with rows bar-J, columns bar-I
    if k and set(g.eye) != set(g.jay):
        non_boundary = g.interior
        order = {v: p for p, v in enumerate(non_boundary, start=1)}
        lap = g.laplacian(removed=g.boundary)
        keep_rows = [p - 1 for v, p in order.items() if v not in set(g.jay)]
        keep_cols = [p - 1 for v, p in order.items() if v not in set(g.eye)]
        keep_rows.sort()
        keep_cols.sort()
        minor = [[lap[r][c] for c in keep_cols] for r in keep_rows]
        sign = (-1) ** (
            sum(order[v] for v in g.eye) + sum(order[v] for v in g.jay)
        )
        expected = sign * counts.signed_pairing_sum()
        got = int_det(minor)
        if got != expected:
            raise ConsistencyError(
                f"all-minors mismatch: det={got}, signed enumeration={expected}"
            )
    return counts
