"""Asymptotics of determinants det[f(v_i - u_j)] of shifted series.

The central identity expands such a determinant over pairs of partitions:

    det[f(v_i - u_j)] = Delta(v) Delta(-u) *
        sum_{lambda, mu} C_{lambda,mu} s_lambda(v) s_mu(-u),

    C_{lambda,mu} = det[ b_{e_j + n_i} * C(e_j + n_i, e_j) ],
    e = lambda + delta,  n = mu + delta,  delta = (k-1, ..., 1, 0),

with s the Schur polynomials and b the series coefficients.  Truncating
both sides at a common total degree in (u, v) turns the identity into an
exact statement about polynomials, which this module implements and which
the tests check coefficient-by-coefficient: :func:`fk_direct` expands the
determinant, :func:`fk_expand` evaluates the partition sum, and the two
must coincide exactly.

Specializing the series to b_n of a power law g(x) = x^(-alpha) or of a
logarithm g(x) = c1 - c2 log x collapses the sum to closed forms, giving
the leading large-r behavior of det[g(r + u_i - v_j)]; these closed forms
are :func:`powerlaw_leading` and :func:`log_leading`.

Truncation is realized by grading: substituting u -> t*u, v -> t*v makes
both sides univariate polynomials in t whose degree-d parts are the total-
degree-d parts in (u, v); all polynomials here are coefficient lists in t.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InsufficientCutoffError

__all__ = [
    "Partition",
    "TruncatedSeries",
    "ShiftVectors",
    "partitions_up_to",
    "schur_eval",
    "coeff_det",
    "fk_direct",
    "fk_expand",
    "powerlaw_leading",
    "log_leading",
    "vandermonde_pair",
]


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of non-negative parts (trailing zeros allowed)."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        ps = tuple(self.parts)
        object.__setattr__(self, "parts", ps)
        if any(p < 0 for p in ps):
            raise ValueError("parts must be non-negative")
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError("parts must be weakly decreasing")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def padded(self, k: int) -> tuple[int, ...]:
        if len(self.parts) > k and any(p for p in self.parts[k:]):
            raise ValueError(f"partition has more than {k} non-zero parts")
        return tuple(self.parts[:k]) + (0,) * (k - len(self.parts[:k]))


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients b_0 ... b_D of a power series truncated at degree D."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        if i < 0:
            raise IndexError(i)
        if i > self.cutoff:
            raise InsufficientCutoffError(
                f"coefficient b_{i} requested but series is cut off at {self.cutoff}"
            )
        return self.coeffs[i]


@dataclass(frozen=True)
class ShiftVectors:
    """The two k-tuples of shifts u, v entering det[f(v_i - u_j)]."""

    u: tuple
    v: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if len(self.u) != len(self.v):
            raise ValueError("u and v must have the same length")
        if not self.u:
            raise ValueError("shift vectors must be non-empty")

    @property
    def k(self) -> int:
        return len(self.u)


def _partitions_fixed(weight: int, max_parts: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if weight == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in _partitions_fixed(weight - first, max_parts - 1, first):
            yield (first,) + rest


def partitions_up_to(k: int, max_weight: int) -> list[Partition]:
    """All partitions with at most k non-zero parts and weight <= max_weight,
    in graded (weight-major) lexicographic order."""
    out: list[Partition] = []
    for w in range(max_weight + 1):
        for parts in _partitions_fixed(w, k, w):
            out.append(Partition(parts))
    return out


def _det_exact(matrix: Sequence[Sequence]) -> object:
    """Determinant by Gaussian elimination; exact for Fraction entries."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [list(row) for row in matrix]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0) * result
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = m[r][col] / p
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return result if sign == 1 else -result


def _ssyt_rows(shape: tuple[int, ...], k: int, above: tuple[int, ...] | None):
    """Yield tuples of entry values for semistandard tableaux, row by row."""
    if not shape:
        yield ()
        return
    width = shape[0]

    def fill(col: int, prev: int, row: tuple[int, ...]):
        if col == width:
            for rest in _ssyt_rows(shape[1:], k, row):
                yield row + rest
            return
        lo = max(prev, (above[col] + 1) if above is not None else 1)
        for val in range(lo, k + 1):
            yield from fill(col + 1, val, row + (val,))

    yield from fill(0, 1, ())


def schur_eval(lam: Partition, x: Sequence) -> object:
    """Schur polynomial s_lambda evaluated at the k values x.

    Primary path is the bialternant ratio a_{lambda+delta}(x) / Delta(x),
    valid for pairwise distinct x; coincident values fall back to the
    semistandard-tableau sum.  Exact for rational inputs.
    """
    k = len(x)
    parts = lam.padded(k)
    if len(set(x)) == k:
        delta = tuple(range(k - 1, -1, -1))
        num = [[x[i] ** (parts[j] + delta[j]) for j in range(k)] for i in range(k)]
        den = [[x[i] ** delta[j] for j in range(k)] for i in range(k)]
        denominator = _det_exact(den)
        return _det_exact(num) / denominator
    shape = tuple(p for p in parts if p)
    total = Fraction(0)
    for entries in _ssyt_rows(shape, k, None):
        term = Fraction(1)
        for val in entries:
            term *= x[val - 1]
        total += term
    return total


def coeff_det(lam: Partition, mu: Partition, b: TruncatedSeries) -> Fraction:
    """The constant C_{lambda,mu} of the expansion (a k x k determinant)."""
    k = max(len(lam.parts), len(mu.parts), 1)
    lp = lam.padded(k)
    mp = mu.padded(k)
    delta = tuple(range(k - 1, -1, -1))
    e = [lp[j] + delta[j] for j in range(k)]
    n = [mp[i] + delta[i] for i in range(k)]
    matrix = [
        [b.coeff(e[j] + n[i]) * math.comb(e[j] + n[i], e[j]) for j in range(k)]
        for i in range(k)
    ]
    return _det_exact(matrix)


def vandermonde_pair(sv: ShiftVectors):
    """Delta(v) * Delta(-u) = prod_{i<j} (v_i - v_j) * prod_{i<j} (u_j - u_i)."""
    k = sv.k
    dv = math.prod((sv.v[i] - sv.v[j] for i in range(k) for j in range(i + 1, k)), start=1)
    du = math.prod((sv.u[j] - sv.u[i] for i in range(k) for j in range(i + 1, k)), start=1)
    return dv * du


def _tp_mul(a: list[Fraction], b: list[Fraction], cutoff: int) -> list[Fraction]:
    out = [Fraction(0)] * (cutoff + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        jmax = cutoff - i
        for j, bj in enumerate(b[: jmax + 1]):
            if bj:
                out[i + j] += ai * bj
    return out


def fk_direct(
    b: TruncatedSeries, sv: ShiftVectors, total_degree_cutoff: int
) -> tuple[Fraction, ...]:
    """det[f(v_i - u_j)] graded by total degree, truncated at the cutoff.

    Returns the coefficient list (degree 0 .. cutoff) of the determinant
    after the substitution u -> t*u, v -> t*v; entry l is the exact total-
    degree-l part.  This is the oracle side of the expansion identity.
    """
    if total_degree_cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    k = sv.k
    if total_degree_cutoff > b.cutoff:
        raise InsufficientCutoffError(
            f"direct determinant needs b up to degree {total_degree_cutoff}, "
            f"series is cut off at {b.cutoff}"
        )
    entries = [
        [
            [b.coeff(l) * (Fraction(sv.v[i]) - Fraction(sv.u[j])) ** l
             for l in range(total_degree_cutoff + 1)]
            for j in range(k)
        ]
        for i in range(k)
    ]
    total = [Fraction(0)] * (total_degree_cutoff + 1)
    for perm in itertools.permutations(range(k)):
        inversions = sum(
            1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
        )
        prod = [Fraction(1)] + [Fraction(0)] * total_degree_cutoff
        for i in range(k):
            prod = _tp_mul(prod, entries[i][perm[i]], total_degree_cutoff)
        if inversions % 2 == 0:
            total = [t + p for t, p in zip(total, prod)]
        else:
            total = [t - p for t, p in zip(total, prod)]
    return tuple(total)


def fk_expand(
    b: TruncatedSeries, sv: ShiftVectors, total_degree_cutoff: int
) -> tuple[Fraction, ...]:
    """Partition-sum side of the identity, graded and truncated like fk_direct.

    The pair (lambda, mu) contributes at total degree
    k(k-1) + |lambda| + |mu|, so the sum runs over
    |lambda| + |mu| <= cutoff - k(k-1); the needed series coefficients reach
    index |lambda| + |mu| + 2(k-1) and an :class:`InsufficientCutoffError`
    is raised if the series is shorter.
    """
    if total_degree_cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    k = sv.k
    base = k * (k - 1)
    out = [Fraction(0)] * (total_degree_cutoff + 1)
    max_weight = total_degree_cutoff - base
    if max_weight < 0:
        return tuple(out)
    dd = vandermonde_pair(sv)
    v = [Fraction(x) for x in sv.v]
    neg_u = [-Fraction(x) for x in sv.u]
    parts = partitions_up_to(k, max_weight)
    schur_v = {p: schur_eval(p, v) for p in parts}
    schur_u = {p: schur_eval(p, neg_u) for p in parts}
    for lam in parts:
        for mu in parts:
            w = lam.weight + mu.weight
            if w > max_weight:
                continue
            c = coeff_det(
                Partition(lam.padded(k)), Partition(mu.padded(k)), b
            )
            if c:
                out[base + w] += dd * c * schur_v[lam] * schur_u[mu]
    return tuple(out)


def _pochhammer(alpha: float, i: int) -> float:
    out = 1.0
    for j in range(i):
        out *= alpha + j
    return out


def powerlaw_leading(alpha: float, k: int, sv: ShiftVectors, r: float) -> float:
    """Leading term of det[(r + u_i - v_j)^(-alpha)] as r grows:

        Delta(v) Delta(-u) r^{-k(alpha+k-1)} prod_{i=0}^{k-1} (alpha)_i / i!.

    Relative accuracy of the true determinant against this is O(1/r).
    """
    if sv.k != k:
        raise ValueError("shift vectors do not match k")
    if r <= max(abs(ui - vj) for ui in sv.u for vj in sv.v):
        raise ValueError("r must exceed max|u_i - v_j|")
    dd = float(vandermonde_pair(sv))
    prod = math.prod(_pochhammer(alpha, i) / math.factorial(i) for i in range(k))
    return dd * r ** (-k * (alpha + k - 1)) * prod


def log_leading(
    c1: float, c2: float, k: int, sv: ShiftVectors, r: float, mode: str
) -> float:
    """Leading behavior of det[c1 - c2*log(r + u_i - v_j)] at large r.

    The determinant is exactly linear in c1 (the c1 part is a rank-one
    perturbation), det = A*c1 + B with

        A ~  Delta(v) Delta(-u) c2^(k-1) / ((k-1)! r^{k(k-1)}),
        B ~ -Delta(v) Delta(-u) c2^k ln(r) / ((k-1)! r^{k(k-1)}).

    ``mode="const_term"`` returns A (the coefficient of c1, i.e. the
    c1 -> infinity limit of det/c1, taken before r -> infinity);
    ``mode="log_term"`` returns B, the c1-free leading part.  Note the sign
    of B: for k = 1 the determinant is c1 - c2*ln(r + u_1 - v_1), whose
    c1-free part is negative for positive c2.
    """
    if sv.k != k:
        raise ValueError("shift vectors do not match k")
    if r <= max(abs(ui - vj) for ui in sv.u for vj in sv.v):
        raise ValueError("r must exceed max|u_i - v_j|")
    dd = float(vandermonde_pair(sv))
    scale = dd / (math.factorial(k - 1) * r ** (k * (k - 1)))
    if mode == "const_term":
        return scale * c2 ** (k - 1)
    if mode == "log_term":
        return -scale * c2**k * math.log(r)
    raise ValueError("mode must be 'log_term' or 'const_term'")
