"""Exact arithmetic in the ring Q[1/pi] and its rank-one symbolic extension.

A :class:`PiPoly` is a polynomial in the single quantity 1/pi with
arbitrary-precision rational coefficients,

    p = c0 + c1/pi + c2/pi^2 + ... ,

stored as a tuple of ``fractions.Fraction`` with no trailing zeros.  This
ring is where all exact lattice Green values live: potential-kernel
increments, half-plane Green functions and the determinant tables built
from them.  There is no division; ratios are carried as explicit
numerator/denominator pairs by callers and only ever evaluated numerically.

Numerical evaluation is *certified*: :meth:`PiPoly.eval_interval` returns a
rational :class:`Interval` guaranteed to contain the exact real value.  The
only approximate ingredient is an enclosure of pi itself (obtained from
mpmath with directed rounding); everything else is exact Fraction
arithmetic, so enclosures survive the enormous coefficient cancellations
that occur in Green determinants at large separations.

A :class:`SymbolicGreen` is a pair ``a*GG + p`` where ``GG`` stands for the
divergent constant 2*G_{0,0} of the infinite-lattice Green function and
``a``, ``p`` are PiPoly.  Matrices whose entries all share one and the same
GG-coefficient are a rank-one perturbation of their finite parts, so their
determinant is exactly linear in GG; :func:`sym_det` exploits this.  Ratios
of GG-coefficients are how closed-boundary probabilities acquire a finite
value even though every matrix entry is individually divergent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from mpmath import libmp

from .errors import ConsistencyError

RationalLike = Union[int, Fraction]

__all__ = [
    "PiPoly",
    "SymbolicGreen",
    "Interval",
    "det",
    "det_minors",
    "sym_det",
    "pi_bounds",
    "ONE",
    "ZERO",
]


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints, ``lo <= hi``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: RationalLike) -> bool:
        return self.lo <= value <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    def divide(self, other: "Interval") -> "Interval":
        """Interval quotient; ``other`` must not contain zero."""
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        quotients = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return Interval(min(quotients), max(quotients))


def _fraction_from_mpf_tuple(t) -> Fraction:
    sign, man, exp, _ = t
    value = Fraction(man)
    if exp >= 0:
        value *= 2**exp
    else:
        value /= 2 ** (-exp)
    return -value if sign else value


def pi_bounds(prec_bits: int) -> Interval:
    """Certified enclosure of pi at roughly ``prec_bits`` bits of precision."""
    if prec_bits < 8:
        prec_bits = 8
    lo = _fraction_from_mpf_tuple(libmp.mpf_pi(prec_bits, "d"))
    hi = _fraction_from_mpf_tuple(libmp.mpf_pi(prec_bits, "u"))
    return Interval(lo, hi)


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class PiPoly:
    """Polynomial in 1/pi with exact rational coefficients (immutable)."""

    __slots__ = ("coeffs",)

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[RationalLike] = ()) -> None:
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("PiPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, value: RationalLike) -> "PiPoly":
        return cls((value,))

    @classmethod
    def term(cls, coeff: RationalLike, power: int) -> "PiPoly":
        """The monomial ``coeff / pi**power``."""
        if power < 0:
            raise ValueError("power must be non-negative")
        return cls((0,) * power + (coeff,))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree in 1/pi; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "PiPoly") -> "PiPoly":
        if not isinstance(other, PiPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return PiPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    def __sub__(self, other: "PiPoly") -> "PiPoly":
        if not isinstance(other, PiPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return PiPoly(self.coeff(i) - other.coeff(i) for i in range(n))

    def __neg__(self) -> "PiPoly":
        return PiPoly(-c for c in self.coeffs)

    def __mul__(self, other: Union["PiPoly", RationalLike]) -> "PiPoly":
        if isinstance(other, (int, Fraction)):
            return PiPoly(c * other for c in self.coeffs)
        if not isinstance(other, PiPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PiPoly(out)

    __rmul__ = __mul__

    def exact_div(self, other: "PiPoly") -> "PiPoly":
        """Exact polynomial quotient; raises if the division has a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return ZERO
        dq = self.degree - other.degree
        if dq < 0:
            raise ValueError("inexact polynomial division")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] / lead
            quot[i] = c
            if c != 0:
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] -= c * oc
        if any(rem):
            raise ValueError("inexact polynomial division")
        return PiPoly(quot)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PiPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == PiPoly.rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- evaluation -----------------------------------------------------------

    def eval_interval(self, precision_bits: int = 64) -> Interval:
        """Certified enclosure of the real value.

        The returned interval contains the exact value and its width is at
        most ``2**(1 - precision_bits) * max(1, |value|)``.  Working
        precision is raised automatically when coefficient cancellation
        demands it, so huge nearly-cancelling coefficients are safe.
        """
        if precision_bits < 32:
            raise ValueError("precision_bits must be at least 32")
        if self.is_zero():
            return Interval(Fraction(0), Fraction(0))
        coeff_bits = max(
            c.numerator.bit_length() + c.denominator.bit_length() for c in self.coeffs
        )
        prec = precision_bits + coeff_bits + len(self.coeffs).bit_length() + 8
        budget = Fraction(2) ** (1 - precision_bits)
        while True:
            x = _inv_pi_interval(prec)
            acc = Interval(self.coeffs[-1], self.coeffs[-1])
            for c in reversed(self.coeffs[:-1]):
                prod = acc * x
                acc = Interval(prod.lo + c, prod.hi + c)
            bound = max(Fraction(1), abs(acc.lo), abs(acc.hi))
            if acc.width <= budget * bound:
                return acc
            prec *= 2

    def __float__(self) -> float:
        return float(self.eval_interval(64))

    # -- serialization -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form ``"c0 + c1/pi + c2/pi^2 + ..."``.

        Every coefficient appears as a signed reduced fraction ``p/q``
        (including interior zeros, so the form is positional and bit-exact);
        the zero polynomial is ``"0/1"``.
        """
        if self.is_zero():
            return "0/1"
        parts = []
        for i, c in enumerate(self.coeffs):
            frac = f"{c.numerator}/{c.denominator}"
            if i == 0:
                parts.append(frac)
            elif i == 1:
                parts.append(f"{frac}/pi")
            else:
                parts.append(f"{frac}/pi^{i}")
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "PiPoly":
        coeffs: list[Fraction] = []
        for i, token in enumerate(text.strip().split(" + ")):
            token = token.strip()
            if i == 0:
                frac = token
            elif i == 1:
                if not token.endswith("/pi"):
                    raise ValueError(f"malformed term {token!r}")
                frac = token[: -len("/pi")]
            else:
                suffix = f"/pi^{i}"
                if not token.endswith(suffix):
                    raise ValueError(f"malformed term {token!r}")
                frac = token[: -len(suffix)]
            num, _, den = frac.partition("/")
            if not den:
                raise ValueError(f"malformed rational {frac!r}")
            coeffs.append(Fraction(int(num), int(den)))
        return cls(coeffs)

    def to_json_obj(self) -> list[list[str]]:
        """JSON form: list of ``[numerator, denominator]`` decimal strings."""
        return [[str(c.numerator), str(c.denominator)] for c in self.coeffs]

    @classmethod
    def from_json_obj(cls, obj: Sequence[Sequence[str]]) -> "PiPoly":
        return cls(Fraction(int(num), int(den)) for num, den in obj)

    def __repr__(self) -> str:
        return f"PiPoly({self.to_text()!r})"


ZERO = PiPoly()
ONE = PiPoly((1,))

_INV_PI_CACHE: dict[int, Interval] = {}


def _inv_pi_interval(prec: int) -> Interval:
    try:
        return _INV_PI_CACHE[prec]
    except KeyError:
        pi = pi_bounds(prec)
        inv = Interval(1 / pi.hi, 1 / pi.lo)
        if len(_INV_PI_CACHE) > 64:
            _INV_PI_CACHE.clear()
        _INV_PI_CACHE[prec] = inv
        return inv


def _pivot_row(m: list[list[PiPoly]], col: int) -> int | None:
    for r in range(col, len(m)):
        if m[r][col]:
            return r
    return None


def det(matrix: Sequence[Sequence[PiPoly]]) -> PiPoly:
    """Exact determinant of a square PiPoly matrix.

    Fraction-free (Bareiss) elimination over the polynomial ring: every
    division is an exact polynomial division, which keeps intermediate
    coefficient growth polynomial instead of exponential.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        return ONE
    m = [list(row) for row in matrix]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        pivot = _pivot_row(m, k)
        if pivot is None:
            return ZERO
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = ZERO
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def det_minors(matrix: Sequence[Sequence[PiPoly]]) -> PiPoly:
    """Determinant by first-row cofactor expansion (cross-check path)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        return ONE
    if n == 1:
        return matrix[0][0]
    total = ZERO
    for j, entry in enumerate(matrix[0]):
        if not entry:
            continue
        minor = [
            [row[c] for c in range(n) if c != j] for row in matrix[1:]
        ]
        term = entry * det_minors(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class SymbolicGreen:
    """Value ``g_coeff * GG + finite`` with GG the divergent constant 2*G_{0,0}."""

    g_coeff: PiPoly
    finite: PiPoly

    def __add__(self, other: "SymbolicGreen") -> "SymbolicGreen":
        return SymbolicGreen(self.g_coeff + other.g_coeff, self.finite + other.finite)

    def __sub__(self, other: "SymbolicGreen") -> "SymbolicGreen":
        return SymbolicGreen(self.g_coeff - other.g_coeff, self.finite - other.finite)

    def substitute(self, value: RationalLike) -> PiPoly:
        """Replace GG by a concrete rational (for limit cross-checks)."""
        return self.g_coeff * value + self.finite

    @classmethod
    def finite_only(cls, finite: PiPoly) -> "SymbolicGreen":
        return cls(ZERO, finite)


def sym_det(matrix: Sequence[Sequence[SymbolicGreen]]) -> SymbolicGreen:
    """Determinant of a matrix of SymbolicGreen with one shared GG-coefficient.

    All entries must carry the same GG-coefficient c (possibly zero).  The
    matrix is then ``F + c*GG*J`` with J the all-ones matrix, a rank-one
    perturbation, so the determinant is exactly linear in GG:

        det = det(F) + GG * (det(F + c*J) - det(F)).

    The GG part equals c times the sum of all cofactors of F (matrix
    determinant lemma); no GG^m term with m >= 2 can appear.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        return SymbolicGreen(ZERO, ONE)
    c = matrix[0][0].g_coeff
    for row in matrix:
        for entry in row:
            if entry.g_coeff != c:
                raise ConsistencyError(
                    "entries carry different GG-coefficients; "
                    "determinant is not linear in GG"
                )
    finite = [[entry.finite for entry in row] for row in matrix]
    det_f = det(finite)
    if c.is_zero():
        return SymbolicGreen(ZERO, det_f)
    shifted = [[entry + c for entry in row] for row in finite]
    return SymbolicGreen(det(shifted) - det_f, det_f)
