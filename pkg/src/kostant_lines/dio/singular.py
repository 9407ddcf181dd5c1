"""Simple-singular Kostant lines: exact scans, the elementary families and the
third-root quartic."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt

from ..liealg import (VerificationError, kostant_entry_closed, simple_root_closed,
                      simple_root_on_kostant)

WORKERS_ENV = "KOSTANT_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, order=True)
class SingularTriple:
    d: int
    e: int
    j: int


def _scan_one_d(args):
    d, root = args
    out = []
    for e in range(1, d):
        if root is None:
            entries = [kostant_entry_closed(d, e, j) for j in range(1, d + 1)]
            for j in range(1, d):
                s = simple_root_closed(d, e, j)
                if entries[j - 1] - entries[j] != s:
                    raise VerificationError(f"sigma_{j}(kappa^{e}) mismatch in sl_{d}")
                if s == 0:
                    out.append((d, e, j))
        elif root <= d - 1 and simple_root_on_kostant(d, e, root) == 0:
            out.append((d, e, root))
    return out


def _run(fn, tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def singular_scan(d_max: int, root: int | None = None, workers: int | None = None) -> list:
    """All (d, e, j) with sigma_j(kappa^e) = 0 and 3 <= d <= d_max, sorted.

    ``root`` restricts the scan to one simple root, which is much cheaper.
    """
    if d_max < 3:
        raise ValueError("d_max must be >= 3")
    workers = default_workers() if workers is None else workers
    tasks = [(d, root) for d in range(3, d_max + 1)]
    hits = [t for chunk in _run(_scan_one_d, tasks, workers) for t in chunk]
    return [SingularTriple(*t) for t in sorted(hits)]


FAMILY_IV = ((4, -5), (1, -1))
FAMILY_V = ((6, -7), (1, -1))


def _orbit(M, seed, bound):
    d, j = seed
    while d <= bound:
        yield d, j
        d, j = M[0][0] * d + M[0][1] * j, M[1][0] * d + M[1][1] * j


def q3(d: int, j: int) -> int:
    return -d * d + 5 * d * j - 5 * j * j


def _family_raw(family: str, bound: int):
    if family == "i":
        for n in range(2, bound // 2 + 1):
            for e in range(2, 2 * n, 2):
                yield 2 * n, e, n
    elif family == "ii":
        e = 2
        while 1 + e * (e + 1) // 2 <= bound:
            yield 1 + e * (e + 1) // 2, e, 2
            e += 1
    elif family == "iii":
        m = 1
        while 4 * m + 3 <= bound:
            yield 4 * m + 3, 2 * m + 1, 2 * m
            m += 1
    elif family == "iv":
        for d, j in _orbit(FAMILY_IV, (7, 2), bound):
            if q3(d, j) != 1:
                raise VerificationError(f"q3({d},{j}) = {q3(d, j)} along family iv")
            yield d, 3, j
    elif family == "v":
        for seed in ((11, 2), (17, 3)):
            for d, j in _orbit(FAMILY_V, seed, bound):
                yield d, 4, j
    else:
        raise ValueError(f"unknown family {family!r}")


def _verify(t):
    d, e, j = t
    return simple_root_on_kostant(d, e, j) == 0


def family_members(family: str, bound: int, workers: int | None = None) -> list:
    """Members with d <= bound, each re-verified exactly."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    workers = default_workers() if workers is None else workers
    raw = sorted(set(_family_raw(family, bound)))
    for t, ok in zip(raw, _run(_verify, raw, workers)):
        if not ok:
            raise VerificationError(f"family {family} member {t} is not singular")
    return [SingularTriple(*t) for t in raw]


def sigma3_poly(d: int, e: int) -> int:
    return e**4 - 6*d*e**2 + 2*e**3 + 6*d**2 - 6*d*e + 11*e**2 - 18*d + 10*e + 12


def sigma3_zeros(d_max: int) -> list:
    """(d, e) with 1 < e < d <= d_max and sigma3_poly(d, e) = 0."""
    return [(d, e) for d in range(3, d_max + 1) for e in range(2, d) if sigma3_poly(d, e) == 0]


def quartic_value(x: int) -> int:
    return 3 * (x**4 + 2 * x**3 - x**2 - 2 * x + 3)


def recover_d(e: int, y: int) -> tuple:
    """Integral roots d of sigma3_poly(., e) given y^2 = quartic_value(e)."""
    out = []
    for s in (1, -1):
        num = 3 * (e * e + e + 3) + s * y
        out.append(num // 6 if num % 6 == 0 else None)
    return tuple(out)


def _quartic_range(bounds):
    lo, hi = bounds
    rows = []
    for e in range(lo, hi):
        f = quartic_value(e)
        y = isqrt(f)
        if y * y == f:
            rows.append((e, y) + recover_d(e, y))
    return rows


def quartic_solutions(e_max: int, workers: int | None = None) -> list:
    """Rows (e, y, d_plus, d_minus) for 0 <= e <= e_max with f(e) a square."""
    if e_max < 0:
        raise ValueError("e_max must be >= 0")
    workers = default_workers() if workers is None else workers
    step = max(1, (e_max + 1) // (8 * workers) + 1)
    tasks = [(lo, min(lo + step, e_max + 1)) for lo in range(0, e_max + 1, step)]
    return sorted(r for chunk in _run(_quartic_range, tasks, workers) for r in chunk)
