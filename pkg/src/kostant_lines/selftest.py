"""Quick invariant checks, each comparing two independent routes."""
from __future__ import annotations

import math

import mpmath
import numpy as np

from . import dio, kahler, liealg


def _kostant():
    for d in range(2, 13):
        liealg.kostant_table(d)
    return True, "bracket and closed form agree for d <= 12"


def _sigma():
    for d in range(3, 31):
        for e in range(1, d):
            for j in range(1, d):
                liealg.simple_root_on_kostant(d, e, j)
    return True, "both routes agree for d <= 30"


def _group_law():
    P, Q, R = dio.R1, dio.R2, dio.add(dio.R1, dio.R2)
    assoc = dio.add(dio.add(P, Q), R) == dio.add(P, dio.add(Q, R))
    torsion = dio.scalar_mul(2, dio.T).is_infinity
    inverse = dio.add(P, dio.negate(P)).is_infinity
    return assoc and torsion and inverse, "associativity, 2T = O, P - P = O"


def _birational():
    count = 0
    for n1 in range(-2, 3):
        for n2 in range(-2, 3):
            for t in (0, 1):
                P = dio.E.combination(n1, n2, t)
                if P.is_infinity:
                    continue
                for v in (1, 2):
                    try:
                        dio.birational_X(v, P)
                        count += 1
                    except ZeroDivisionError:
                        pass
    return count > 0, f"{count} images checked on the quartic"


def _agm():
    a, b = complex(3.0, 0.5), complex(1.0, -0.25)
    ours = dio.agm(a, b)
    ref = complex(mpmath.agm(a, b))
    err = abs(ours - ref) / abs(ref)
    return err < 1e-13, f"relative error {err:.2e} against mpmath"


def _homomorphism():
    per = dio.real_periods()
    lhs = dio.elliptic_log(dio.add(dio.R1, dio.R2), per)
    rhs = dio.elliptic_log(dio.R1, per) + dio.elliptic_log(dio.R2, per)
    dist = dio.circle_distance(lhs, rhs)
    return dist < 1e-9, f"phi(R1+R2) - phi(R1) - phi(R2) = {dist:.2e} mod 1"


def _kahler():
    worst = max(kahler.compare_with_reference(s, d)["max_rel_err"] for s, d in kahler.reference_forms())
    return worst <= 1e-9, f"worst relative error {worst:.2e}"


def _affine_ratio():
    from .affine_dyn import AffineFlagPair, affine_ratio
    rng = np.random.default_rng(0)
    k, l = 1, 2
    n = 2 * k + l
    worst = 0.0
    for _ in range(10):
        pairs = []
        for _ in range(2):
            plus, minus = rng.standard_normal((n, k + l)), rng.standard_normal((n, k + l))
            pairs.append(AffineFlagPair(plus[:, :k], plus, minus[:, :k], minus, rng.standard_normal(n)))
        r = affine_ratio(*pairs)
        worst = max(worst, float(np.max(np.abs(r.translation - r.oracle_translation))))
    return worst < 1e-9, f"closed form vs circuit, worst {worst:.2e}"


def _margulis_fd():
    from .affine_dyn import jordan_variation_fd, margulis_a_part, random_split_loxodromic, random_traceless
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(10):
        g = random_split_loxodromic(rng, 3, math.log(2), spread=1.0, max_cond=100)
        X = random_traceless(rng, 3)
        worst = max(worst, float(np.max(np.abs(jordan_variation_fd(g, X, 1e-5) - margulis_a_part(g, X)))))
    return worst < 1e-5, f"finite difference vs closed form, worst {worst:.2e}"


def _defect():
    from .affine_dyn import additivity_defect, random_transverse_pair
    f, q = random_transverse_pair(np.random.default_rng(0))
    errs = [additivity_defect(f, q, n).error for n in range(4, 9)]
    ok = all(b <= a * (1 + 1e-9) for a, b in zip(errs, errs[1:])) and errs[-1] < 1e-6
    return ok, "errors " + ", ".join(f"{e:.1e}" for e in errs)


CHECKS = [
    ("kostant_vectors", _kostant),
    ("simple_root_values", _sigma),
    ("group_law", _group_law),
    ("birational_maps", _birational),
    ("agm", _agm),
    ("elliptic_log_homomorphism", _homomorphism),
    ("kahler_reference_forms", _kahler),
    ("affine_ratio_routes", _affine_ratio),
    ("jordan_variation", _margulis_fd),
    ("additivity_defect", _defect),
]


def run_all():
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a raised disagreement is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
