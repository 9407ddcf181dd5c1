"""Principal sl2 triples in sl_d and Kostant vectors.

Kostant vectors are built two independent ways: by iterated exact brackets
kappa^e = (-1)^e (ad F)^e (E^e), and by the falling-factorial closed form.
The closed forms are summed with a term-ratio recurrence so that each term
costs one big-by-small multiplication, which keeps the d ~ 500 family checks
cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import factorial, gcd
from typing import Sequence

from .exact_core import ExactMatrix, binomial, bracket, falling_factorial


class VerificationError(RuntimeError):
    """Two independent evaluations of an exact identity disagree."""


@dataclass(frozen=True)
class PrincipalTriple:
    d: int
    E: ExactMatrix
    F: ExactMatrix
    H: ExactMatrix


@dataclass(frozen=True)
class KostantVector:
    d: int
    e: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.d:
            raise ValueError("entries must have length d")
        if sum(self.entries) != 0:
            raise VerificationError(f"kappa^{self.e} in sl_{self.d} is not trace-free")
        sign = -1 if self.e % 2 else 1
        if tuple(reversed(self.entries)) != tuple(sign * x for x in self.entries):
            raise VerificationError(f"kappa^{self.e} in sl_{self.d} breaks the reversal law")

    def primitive(self) -> tuple:
        """Direction as a primitive integer vector with positive first entry."""
        g = reduce(gcd, (abs(x) for x in self.entries), 0)
        s = 1 if self.entries[0] > 0 else -1
        return tuple(s * x // g for x in self.entries)

    def content(self) -> int:
        """The scalar c with entries = c * primitive()."""
        return self.entries[0] // self.primitive()[0]


@dataclass(frozen=True)
class LinearFunctional:
    d: int
    coords: tuple

    def __call__(self, a: Sequence):
        if len(a) != self.d:
            raise ValueError("dimension mismatch")
        return sum((Fraction(c) * x for c, x in zip(self.coords, a)), Fraction(0))


def simple_root(d: int, j: int) -> LinearFunctional:
    if not 1 <= j <= d - 1:
        raise ValueError("simple root index out of range")
    return LinearFunctional(d, tuple(1 if i == j - 1 else -1 if i == j else 0 for i in range(d)))


def first_weight(d: int) -> LinearFunctional:
    return LinearFunctional(d, tuple(1 if i == 0 else 0 for i in range(d)))


def f_weight(d: int, i: int) -> int:
    return i * (d - i)


def principal_triple(d: int) -> PrincipalTriple:
    if d < 2:
        raise ValueError("principal triple needs d >= 2")
    E = ExactMatrix(d, d, [1 if c == r + 1 else 0 for r in range(d) for c in range(d)])
    F = ExactMatrix(d, d, [f_weight(d, c + 1) if r == c + 1 else 0 for r in range(d) for c in range(d)])
    H = ExactMatrix.diag([d - 1 - 2 * i for i in range(d)])
    if bracket(H, E) != E.scale(2) or bracket(H, F) != F.scale(-2) or bracket(E, F) != H:
        raise VerificationError("sl2 relations fail")
    return PrincipalTriple(d, E, F, H)


def _check_range(d: int, e: int):
    if not 1 <= e <= d - 1:
        raise ValueError(f"exponent e={e} out of range for d={d}")


def kostant_vector_bracket(d: int, e: int) -> KostantVector:
    _check_range(d, e)
    tr = principal_triple(d)
    X = tr.E ** e
    for _ in range(e):
        X = bracket(tr.F, X)
    if not X.is_diagonal():
        raise VerificationError(f"(ad F)^{e}(E^{e}) is not diagonal in sl_{d}")
    sign = -1 if e % 2 else 1
    return KostantVector(d, e, tuple(sign * int(x) for x in X.diagonal()))


def _entry_sum(d: int, e: int, j: int) -> int:
    """sum_t (-1)^t C(e,t)^2 (j-1)^{e-t} (d-j)^{t}, falling powers."""
    t0, t1 = max(0, e - j + 1), min(e, d - j)
    if t0 > t1:
        return 0
    term = binomial(e, t0) ** 2 * falling_factorial(j - 1, e - t0) * falling_factorial(d - j, t0)
    if t0 % 2:
        term = -term
    total = term
    for t in range(t0, t1):
        term = -term * (e - t) ** 2 * (d - j - t) // ((t + 1) ** 2 * (j - e + t))
        total += term
    return total


def _sigma_sum(d: int, e: int, j: int) -> int:
    """sum_{t>=1} (-1)^t C(e,t) C(e,t-1) (j-1)^{e-t} (d-1-j)^{t-1}, falling powers."""
    t0, t1 = max(1, e - j + 1), min(e, d - j)
    if t0 > t1:
        return 0
    term = binomial(e, t0) * binomial(e, t0 - 1) * falling_factorial(j - 1, e - t0) * falling_factorial(d - 1 - j, t0 - 1)
    if t0 % 2:
        term = -term
    total = term
    for t in range(t0, t1):
        term = -term * (e - t) * (e - t + 1) * (d - j - t) // ((t + 1) * t * (j - e + t))
        total += term
    return total


def kostant_entry_closed(d: int, e: int, j: int) -> int:
    """Entry j (1-based) of kappa^e from the closed form."""
    _check_range(d, e)
    if not 1 <= j <= d:
        raise ValueError("entry index out of range")
    s = factorial(e) * _entry_sum(d, e, j)
    return -s if e % 2 else s


def kostant_vector_closed(d: int, e: int) -> KostantVector:
    _check_range(d, e)
    return KostantVector(d, e, tuple(kostant_entry_closed(d, e, j) for j in range(1, d + 1)))


def simple_root_closed(d: int, e: int, j: int) -> int:
    """sigma_j(kappa^e) from its own closed form, without the entries."""
    s = factorial(e + 1) * _sigma_sum(d, e, j)
    return -s if e % 2 else s


def simple_root_on_kostant(d: int, e: int, j: int) -> int:
    """sigma_j(kappa^e), evaluated as an entry difference and by the closed form."""
    _check_range(d, e)
    if not 1 <= j <= d - 1:
        raise ValueError(f"simple root index j={j} out of range for d={d}")
    diff = kostant_entry_closed(d, e, j) - kostant_entry_closed(d, e, j + 1)
    closed = simple_root_closed(d, e, j)
    if diff != closed:
        raise VerificationError(f"sigma_{j}(kappa^{e}) in sl_{d}: {diff} != {closed}")
    return closed


def weight1_on_kostant(d: int, e: int) -> int:
    value = kostant_entry_closed(d, e, 1)
    expected = factorial(e) * falling_factorial(d - 1, e)
    if value != expected:
        raise VerificationError(f"first entry of kappa^{e} in sl_{d} is {value}, expected {expected}")
    return value


@lru_cache(maxsize=None)
def kostant_table(d: int) -> tuple:
    """All kappa^e of sl_d from both constructions, checked equal."""
    out = []
    for e in range(1, d):
        a, b = kostant_vector_bracket(d, e), kostant_vector_closed(d, e)
        if a != b:
            raise VerificationError(f"bracket and closed forms of kappa^{e} differ in sl_{d}")
        out.append(a)
    return tuple(out)


# exponents of irreducible reduced root systems
_EXCEPTIONAL = {
    "E6": (6, (1, 4, 5, 7, 8, 11)),
    "E7": (7, (1, 5, 7, 9, 11, 13, 17)),
    "E8": (8, (1, 7, 11, 13, 17, 19, 23, 29)),
    "F4": (4, (1, 5, 7, 11)),
    "G2": (2, (1, 5)),
}


@dataclass(frozen=True)
class ExponentTable:
    type: str
    rank: int
    exponents: tuple


def exponents(type_: str, rank: int) -> ExponentTable:
    t = type_.upper()
    if t in _EXCEPTIONAL:
        r, ex = _EXCEPTIONAL[t]
        if rank != r:
            raise ValueError(f"{t} has rank {r}")
        return ExponentTable(t, rank, ex)
    if t == "A" and rank >= 1:
        ex = tuple(range(1, rank + 1))
    elif t in ("B", "C") and rank >= 2:
        ex = tuple(range(1, 2 * rank, 2))
    elif t == "D" and rank >= 3:
        ex = tuple(range(1, 2 * rank - 2, 2)) + (rank - 1,)
    else:
        raise ValueError(f"unsupported type/rank {type_}{rank}")
    return ExponentTable(t, rank, ex)


def shifted_bracket_check(d: int, e: int, k: int) -> Fraction:
    """Constant c with [[F, E^e], E^k] = c E^(e+k-1)."""
    if not (2 <= e <= d - 1 and 2 <= k <= d - 1):
        raise ValueError("need 2 <= e, k <= d-1")
    if e + k - 1 > d - 1:
        raise ValueError(f"E^{e + k - 1} vanishes in sl_{d}")
    tr = principal_triple(d)
    X = bracket(bracket(tr.F, tr.E ** e), tr.E ** k)
    target = tr.E ** (e + k - 1)
    c = X[0, e + k - 1]
    if X != target.scale(c):
        raise VerificationError("bracket is not proportional to the shifted power of E")
    if e == 3 and k <= d - 3 and c == 0:
        raise VerificationError("shifted bracket vanishes for e = 3")
    return c


def triality_matrix() -> ExactMatrix:
    h = Fraction(1, 2)
    return ExactMatrix.from_rows([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [1, -1, -1, -1]]).scale(h)


def typeD_data(n: int, triality: bool | None = None) -> dict:
    """Anti-fixed Kostant line of D_n in R^n coordinates, and triality for n = 4."""
    if n < 3:
        raise ValueError("type D needs n >= 3")
    if triality is None:
        triality = n == 4
    if triality and n != 4:
        raise ValueError("triality only exists for D_4")
    line = tuple(Fraction(0) for _ in range(n - 1)) + (Fraction(1),)
    out = {"antifixed_line": line}
    if triality:
        tau = triality_matrix()
        out["triality"] = tau
        out["triality_image"] = tau.apply(line)
    return out


def adjoint_factor_split(subtype: str, d: int) -> tuple:
    """Partition of {1..d-1} by the adjoint factors of the embedded subalgebra."""
    s = subtype.upper()
    if s == "C" and d % 2 == 0 and d >= 4 or s == "B" and d % 2 == 1 and d >= 3:
        return (tuple(range(1, d, 2)), tuple(range(2, d, 2)))
    if s == "G2" and d == 7:
        return ((1, 5), (3,), (2, 4, 6))
    raise ValueError(f"incompatible subtype {subtype} for d={d}")
