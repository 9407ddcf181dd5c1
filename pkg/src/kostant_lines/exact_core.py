"""Exact rational arithmetic, dense rational matrices and the falling-factorial
and finite-difference primitives used by the Kostant formulas.

Scalars are :class:`fractions.Fraction`, which is always kept in lowest terms
with a positive denominator, so equality of values is structural.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

Rational = Fraction
IntSeqFunction = Callable[[int], Fraction]

__all__ = [
    "Rational",
    "IntSeqFunction",
    "ExactMatrix",
    "binomial",
    "falling_factorial",
    "finite_difference",
    "bracket",
    "rational_to_str",
    "rational_from_str",
]


def binomial(n: int, k: int) -> int:
    """C(n, k) for integers, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def falling_factorial(z, k: int):
    """z (z-1) ... (z-k+1).

    Returns 1 for ``k == 0`` and 0 for negative ``k``. Integer input stays an
    ``int``; anything else is coerced to :class:`Fraction`.
    """
    if k < 0:
        return 0
    if not isinstance(z, int):
        z = Fraction(z)
    out = 1
    for i in range(k):
        out *= z - i
    return out


def finite_difference(g: IntSeqFunction, k: int, x: int):
    """Forward difference of order ``k`` of ``g`` at ``x``.

    Δ^k g(x) = sum_{i=0}^{k} (-1)^i C(k, i) g(x + k - i).
    """
    if k < 0:
        raise ValueError("difference order must be non-negative")
    total = Fraction(0)
    for i in range(k + 1):
        term = binomial(k, i) * Fraction(g(x + k - i))
        total += -term if i % 2 else term
    return total


def rational_to_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


class ExactMatrix:
    """Immutable dense matrix of rationals, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(Fraction(x) for x in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ValueError("entries length must equal rows * cols")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # constructors
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> "ExactMatrix":
        """The matrix with a single 1 at (i, j), 1-based; it sends e_j to e_i."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError("index out of range")
        ent = [0] * (n * n)
        ent[(i - 1) * n + (j - 1)] = 1
        return cls(n, n, ent)

    # access
    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def diagonal(self) -> tuple:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def is_zero(self) -> bool:
        return not any(self.entries)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    # arithmetic
    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = Fraction(c)
        return ExactMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __rmul__(self, c) -> "ExactMatrix":
        return self.scale(c)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        out = [Fraction(0)] * (n * p)
        B = other.entries
        for i in range(n):
            base = i * p
            for k in range(m):
                a = self.entries[i * m + k]
                if not a:
                    continue
                brow = k * p
                for j in range(p):
                    b = B[brow + j]
                    if b:
                        out[base + j] += a * b
        return ExactMatrix(n, p, out)

    def __pow__(self, k: int) -> "ExactMatrix":
        if self.rows != self.cols or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [Fraction(x) for x in vec]
        return tuple(sum((self[i, j] * v[j] for j in range(self.cols)), Fraction(0)) for i in range(self.rows))

    def trace(self) -> Fraction:
        return sum(self.diagonal(), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}, {self.cols}, {self.to_json()})"

    # serialization
    def to_json(self) -> str:
        return json.dumps([[rational_to_str(x) for x in self.row(i)] for i in range(self.rows)])

    @classmethod
    def from_json(cls, text: str) -> "ExactMatrix":
        data = json.loads(text)
        return cls.from_rows([[rational_from_str(str(x)) for x in r] for r in data])


def bracket(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Commutator AB - BA of two square matrices of equal size."""
    if A.rows != A.cols or A.shape != B.shape:
        raise ValueError(f"bracket needs square matrices of equal size, got {A.shape} and {B.shape}")
    return A @ B - B @ A
