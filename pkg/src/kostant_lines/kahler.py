"""The compatibility functional phi on the Cartan subspace of sl_d.

phi is prescribed on each Kostant line by phi(kappa^e) = c_e * varpi_1(kappa^e)
with an explicit square-root coefficient c_e. The Kostant vectors are pairwise
orthogonal, so the coordinate vector is w = sum_e phi(kappa^e) kappa^e / |kappa^e|^2.
Every step is exact except the square root of each radicand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exact_core import falling_factorial
from .liealg import kostant_table


@dataclass(frozen=True)
class KahlerFunctional:
    d: int
    subtype: str
    radicands: dict          # e -> exact Fraction (0 for dropped exponents)
    coefficients: dict       # e -> float c_e
    coords: tuple            # trace-zero w in sl_d coordinates, unnormalized
    form: tuple = field(default=())  # native coordinates, first entry scaled to 1

    def __call__(self, a) -> float:
        return float(sum(w * float(x) for w, x in zip(self.coords, a)))


def kahler_radicand(d: int, e: int) -> Fraction:
    if not 1 <= e <= d - 1:
        raise ValueError(f"exponent e={e} out of range for d={d}")
    return (Fraction(falling_factorial(d + e, e - 1), falling_factorial(d - 1, e))
            * Fraction(3 * 2 ** e, factorial(2 * e + 1) * (d - 1)))


def kahler_coefficient(d: int, e: int) -> float:
    r = kahler_radicand(d, e)
    if r <= 0:
        raise ValueError(f"non-positive radicand {r}")
    return math.sqrt(r)


def _assemble(d: int, keep) -> tuple:
    table = kostant_table(d)
    radicands, coeffs = {}, {}
    w = [0.0] * d
    for kv in table:
        e = kv.e
        if e not in keep:
            radicands[e], coeffs[e] = Fraction(0), 0.0
            continue
        radicands[e] = kahler_radicand(d, e)
        coeffs[e] = kahler_coefficient(d, e)
        # phi(k)/|k|^2 with the exact ratio k_1/|k|^2 rounded once
        ratio = Fraction(kv.entries[0], sum(x * x for x in kv.entries))
        scale = coeffs[e] * float(ratio)
        for i, x in enumerate(kv.entries):
            w[i] += scale * x
    return radicands, coeffs, tuple(w)


def kahler_in_coordinates(d: int) -> KahlerFunctional:
    if d < 3:
        raise ValueError("need d >= 3")
    radicands, coeffs, w = _assemble(d, set(range(1, d)))
    # drop the trace direction by making the last coordinate vanish
    red = [x - w[-1] for x in w[:-1]]
    form = tuple(x / red[0] for x in red)
    return KahlerFunctional(d, "A", radicands, coeffs, w, form)


def kahler_subtype(subtype: str, d: int) -> KahlerFunctional:
    s = subtype.upper()
    if s == "C" and d % 2 == 0 and d >= 4 or s == "B" and d % 2 == 1 and d >= 5:
        keep = set(range(1, d, 2))
    elif s == "G2" and d == 7:
        keep = {1, 5}
    else:
        raise ValueError(f"subtype {subtype} incompatible with d={d}")
    radicands, coeffs, w = _assemble(d, keep)
    n = d // 2
    native = [w[i] - w[d - 1 - i] for i in range(n)]
    if s == "G2":
        # a = (a1, a2, a1 - a2) inside the B3 coordinates
        native = [native[0] + native[2], native[1] - native[2]]
    form = tuple(x / native[0] for x in native)
    return KahlerFunctional(d, s, radicands, coeffs, w, form)


def reference_forms() -> dict:
    """Reference forms from the literature, in native coordinates, first entry 1."""
    r2, r3, r10, r35, r42 = (math.sqrt(x) for x in (2, 3, 10, 35, 42))
    raw = {
        ("A", 3): [1 - (-1), -r2 / 2 - (-1)],
        ("C", 4): [3 + r10 / 30, 1 - r10 / 10],
        ("G2", 7): [8 + r42 / 315, 2 - r42 / 210],
        ("A", 4): [6 + r10 / 15, 4 - r10 / 15 - r10 * r3 / 3, 2 + 2 * r10 / 15 - r10 * r3 / 3],
        ("C", 6): [5 + 211 * r35 / 3780, 3 - 299 * r35 / 3780, 1 - 79 * r35 / 1890],
        ("B", 7): [3 + r42 * r10 / 90 + r42 / 3780, 2 - r42 * r10 / 90 - r42 / 945,
                   1 - r42 * r10 / 90 + r42 / 756],
    }
    return {k: tuple(x / v[0] for x in v) for k, v in raw.items()}


def compare_with_reference(subtype: str, d: int) -> dict:
    """Computed and reference forms side by side, with the worst relative error."""
    ref = reference_forms()[(subtype.upper(), d)]
    got = (kahler_in_coordinates(d) if subtype.upper() == "A" else kahler_subtype(subtype, d)).form
    err = max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(got, ref))
    return {"subtype": subtype.upper(), "d": d, "computed": got, "reference": ref, "max_rel_err": err}
