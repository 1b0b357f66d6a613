"""Exact rational scalars, matrices and small decision procedures.

Every number in the core is a :class:`fractions.Fraction`, which is always
kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "IntQuadratic",
    "Ordering",
    "SingularMatrix",
    "as_rational",
    "solve_linear_exact",
    "cmp_sqrt",
    "rational_sqrt",
    "certify_quadratic_nonneg",
]


class SingularMatrix(ArithmeticError):
    """Raised when exact elimination meets a column without a nonzero pivot."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently converting them would smuggle binary
    rounding into exact computations.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [[as_rational(v) for v in row] for row in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def matvec(self, x: Sequence[Fraction]) -> list[Fraction]:
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), x)), Fraction(0))
                for i in range(self.rows)]

    def determinant(self) -> Fraction:
        """Exact determinant by pivoted elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        a = self.to_rows()
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[piv][col] == 0:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            for r in range(col + 1, n):
                f = a[r][col] / a[col][col]
                if f:
                    a[r] = [u - f * v for u, v in zip(a[r], a[col])]
        return det


def solve_linear_exact(m: RationalMatrix, y: Sequence) -> list[Fraction]:
    """Solve ``m @ x = y`` exactly.

    Gaussian elimination with the largest-magnitude pivot in each column;
    the result is checked by re-multiplication before it is returned.
    """
    n = m.rows
    if m.cols != n:
        raise ValueError("matrix must be square")
    y = [as_rational(v) for v in y]
    if len(y) != n:
        raise ValueError("right-hand side has the wrong length")

    aug = [row + [rhs] for row, rhs in zip(m.to_rows(), y)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[piv][col] == 0:
            raise SingularMatrix(f"no nonzero pivot in column {col}")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        for r in range(col + 1, n):
            f = aug[r][col] / p
            if f:
                aug[r] = [u - f * v for u, v in zip(aug[r], aug[col])]

    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = aug[i][n] - sum((aug[i][k] * x[k] for k in range(i + 1, n)), Fraction(0))
        x[i] = acc / aug[i][i]

    if m.matvec(x) != y:
        raise ArithmeticError("exact back-substitution check failed")
    return x


def cmp_sqrt(q, s) -> Ordering:
    """Order of the rational ``q`` relative to ``sqrt(s)``, decided exactly."""
    q, s = as_rational(q), as_rational(s)
    if s < 0:
        raise ValueError("cmp_sqrt needs s >= 0")
    if q < 0:
        return Ordering.LESS
    sq = q * q
    if sq < s:
        return Ordering.LESS
    if sq > s:
        return Ordering.GREATER
    return Ordering.EQUAL


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = as_rational(q)
    if q < 0:
        raise ValueError("negative argument")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class IntQuadratic:
    """``p(k) = c2*k**2 + c1*k + c0`` evaluated at integer ``k``."""

    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        for name in ("c2", "c1", "c0"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def __call__(self, k: int) -> Fraction:
        return (self.c2 * k + self.c1) * k + self.c0

    def scaled(self, factor) -> "IntQuadratic":
        f = as_rational(factor)
        return IntQuadratic(self.c2 * f, self.c1 * f, self.c0 * f)


def certify_quadratic_nonneg(p: IntQuadratic, k_min: int) -> bool:
    """True iff ``p(k) >= 0`` for every integer ``k >= k_min``."""
    if p.c2 < 0:
        return False
    if p.c2 == 0:
        # linear: an eventually decreasing line goes negative
        if p.c1 < 0:
            return False
        return p(k_min) >= 0
    vertex = -p.c1 / (2 * p.c2)
    candidates = {k_min}
    lo = math.floor(vertex)
    candidates.update(k for k in (lo, lo + 1) if k >= k_min)
    return min(p(k) for k in candidates) >= 0


def dot(xs: Iterable[Fraction], ys: Iterable[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(xs, ys)), Fraction(0))
