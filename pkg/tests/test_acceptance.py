"""Acceptance criteria, each at its stated tolerance.

Every test records one verdict line, printed in the terminal summary, and
then asserts. Some parts are expected to fail; see the decisions ledger.
"""
import math
import time

import numpy as np
import pytest

from conftest import CRITERIA
from kostant_lines import dio, kahler, liealg
from kostant_lines.affine_dyn import (additivity_defect, affine_ratio, jordan_variation_fd,
                                      margulis_a_part, random_flag_pairs, random_generators, random_split_loxodromic,
                                      random_traceless, random_transverse_pair, sample_variation_cone)
from kostant_lines.exact_core import falling_factorial


def verdict(key, checks):
    """checks: list of (label, ok, detail)."""
    ok = all(c[1] for c in checks)
    failed = [f"{c[0]} ({c[2]})" for c in checks if not c[1]]
    detail = "; ".join(f"{c[0]}: {c[2]}" for c in checks) if ok else "failed: " + "; ".join(failed)
    CRITERIA[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


# scalar * primitive, transcribed from the published table of Kostant vectors for d = 3..8
KOSTANT_TABLE = {
    3: [(1, (2, 0, -2)), (4, (1, -2, 1))],
    4: [(1, (3, 1, -1, -3)), (12, (1, -1, -1, 1)), (36, (1, -3, 3, -1))],
    5: [(1, (4, 2, 0, -2, -4)), (12, (2, -1, -2, -1, 2)), (144, (1, -2, 0, 2, -1)), (576, (1, -4, 6, -4, 1))],
    6: [(1, (5, 3, 1, -1, -3, -5)), (8, (5, -1, -4, -4, -1, 5)), (72, (5, -7, -4, 4, 7, -5)),
        (2880, (1, -3, 2, 2, -3, 1)), (14400, (1, -5, 10, -10, 5, -1))],
    7: [(1, (6, 4, 2, 0, -2, -4, -6)), (12, (5, 0, -3, -4, -3, 0, 5)), (720, (1, -1, -1, 0, 1, 1, -1)),
        (2880, (3, -7, 1, 6, 1, -7, 3)), (86400, (1, -4, 5, 0, -5, 4, -1)),
        (518400, (1, -6, 15, -20, 15, -6, 1))],
    8: [(1, (7, 5, 3, 1, -1, -3, -5, -7)), (12, (7, 1, -3, -5, -5, -3, 1, 7)),
        (180, (7, -5, -7, -3, 3, 7, 5, -7)), (2880, (7, -13, -3, 9, 9, -3, -13, 7)),
        (43200, (7, -23, 17, 15, -15, -17, 23, -7)), (3628800, (1, -5, 9, -5, -5, 9, -5, 1)),
        (25401600, (1, -7, 21, -35, 35, -21, 7, -1))],
}


def test_criterion_01_kostant_table():
    liealg.kostant_table.cache_clear()
    t0 = time.perf_counter()
    mismatches = []
    for d, rows in KOSTANT_TABLE.items():
        for e, (scalar, prim) in enumerate(rows, 1):
            expected = tuple(scalar * x for x in prim)
            if liealg.kostant_vector_bracket(d, e).entries != expected:
                mismatches.append(("bracket", d, e))
            if liealg.kostant_vector_closed(d, e).entries != expected:
                mismatches.append(("closed", d, e))
    dt = time.perf_counter() - t0
    verdict(1, [("table", not mismatches, f"{sum(map(len, KOSTANT_TABLE.values()))} vectors, mismatches {mismatches}"),
                ("runtime < 1 s", dt < 1.0, f"{dt:.3f} s")])


def test_criterion_02_oracle_equivalence():
    t0 = time.perf_counter()
    bad_vec, bad_sigma, n_sigma = [], [], 0
    for d in range(2, 13):
        for e in range(1, d):
            kb, kc = liealg.kostant_vector_bracket(d, e), liealg.kostant_vector_closed(d, e)
            if kb != kc:
                bad_vec.append((d, e))
            for j in range(1, d):
                n_sigma += 1
                if kc.entries[j - 1] - kc.entries[j] != liealg.simple_root_closed(d, e, j):
                    bad_sigma.append((d, e, j))
    dt = time.perf_counter() - t0
    verdict(2, [("vectors", not bad_vec, f"d <= 12, mismatches {bad_vec}"),
                ("sigma", not bad_sigma, f"{n_sigma} triples, mismatches {bad_sigma}"),
                ("runtime < 10 s", dt < 10.0, f"{dt:.2f} s")])


def test_criterion_03_structural_laws():
    w1, orth, rev = [], [], []
    for d in range(2, 13):
        ks = {e: liealg.kostant_vector_closed(d, e).entries for e in range(1, d)}
        for e, k in ks.items():
            if k[0] != math.factorial(e) * falling_factorial(d - 1, e):
                w1.append((d, e))
            if tuple(reversed(k)) != tuple((-1) ** e * x for x in k):
                rev.append((d, e))
            for f in range(e + 1, d):
                if sum(x * y for x, y in zip(k, ks[f])) != 0:
                    orth.append((d, e, f))
    verdict(3, [("first weight", not w1, f"violations {w1}"),
                ("orthogonality", not orth, f"violations {orth}"),
                ("reversal", not rev, f"violations {rev}")])


R2, R3, R10, R35, R42 = (math.sqrt(x) for x in (2, 3, 10, 35, 42))
# published forms in native coordinates, before rescaling
REFERENCE_FORMS = {
    # a1 - a3 - (sqrt2/2) a2 with a3 = -a1 - a2
    ("A", 3): [2.0, 1 - R2 / 2],
    ("C", 4): [3 + R10 / 30, 1 - R10 / 10],
    ("A", 4): [6 + R10 / 15, 4 - R10 / 15 - R10 * R3 / 3, 2 + 2 * R10 / 15 - R10 * R3 / 3],
    ("C", 6): [5 + 211 * R35 / 3780, 3 - 299 * R35 / 3780, 1 - 79 * R35 / 1890],
    ("B", 7): [3 + R42 * R10 / 90 + R42 / 3780, 2 - R42 * R10 / 90 - R42 / 945, 1 - R42 * R10 / 90 + R42 / 756],
    ("G2", 7): [8 + R42 / 315, 2 - R42 / 210],
}


def _computed(subtype, d):
    return kahler.kahler_in_coordinates(d) if subtype == "A" else kahler.kahler_subtype(subtype, d)


def test_criterion_04_kahler_forms():
    checks = []
    for key, ref in REFERENCE_FORMS.items():
        kf = _computed(*key)
        got = np.array(kf.form)
        want = np.array(ref) / ref[0]
        err = float(np.max(np.abs(got - want) / np.abs(want)))
        # the normalizing scale must be positive: phi(kappa^1) > 0 in both
        positive = kf(liealg.kostant_vector_closed(key[1], 1).entries) > 0 and ref[0] > 0
        label = f"{key[0]}{key[1]}" + (" (identified)" if key[0] == "G2" else "")
        checks.append((label, err <= 1e-9 and positive, f"rel err {err:.1e}"))
    verdict(4, checks)


def test_criterion_05_diophantine():
    t0 = time.perf_counter()
    zeros = {(d, e) for d, e in dio.sigma3_zeros(200) if 1 < e < d}
    expected = {(6, 2), (17, 4), (58, 8)}
    sols = dio.quartic_solutions(10**6, workers=1)
    dt = time.perf_counter() - t0
    es = [r[0] for r in sols]
    dvals = {r[0]: {x for x in r[2:] if x is not None} for r in sols}
    verdict(5, [("sigma3 zeros", zeros == expected, f"found {sorted(zeros)}, stated {sorted(expected)}"),
                ("quartic e", es == [0, 1, 2, 4, 8], f"e = {es}"),
                ("quartic d", dvals.get(2) == {6, 3} and dvals.get(4) == {17, 6} and dvals.get(8) == {58, 17},
                 f"d = {[sorted(dvals[e]) for e in (2, 4, 8)]}"),
                ("runtime < 60 s", dt < 60.0, f"{dt:.1f} s single-threaded")])


def test_criterion_06_families():
    checks = []
    for fam in ("i", "ii", "iii", "iv", "v"):
        members = dio.family_members(fam, 500, workers=1)  # raises if a member is not singular
        ok = bool(members) and all(liealg.simple_root_closed(t.d, t.e, t.j) == 0 for t in members[:200])
        if fam == "iv":
            ok = ok and all(dio.q3(t.d, t.j) == 1 for t in members)
        checks.append((f"family {fam}", ok, f"{len(members)} members"))
    verdict(6, checks)


def test_criterion_07_elliptic_numerics():
    c = dio.ellog_constants()
    per = dio.real_periods()
    P = dio.REFERENCE
    checks = [
        ("omega", abs(c.omega - 0.9810124566) <= 1e-9, f"{c.omega:.12f}"),
        ("omega1", abs(c.omega1 - P["omega1"]) <= 1e-8, f"{c.omega1:.12f}"),
        ("omega2", abs(c.omega2 - P["omega2"]) <= 1e-8, f"{c.omega2:.10f}"),
    ]
    for key, ref in (("R1", 0.8918445254), ("R2", 0.6925571056), ("R0", 0.8235278325)):
        v = c.omega_phi[key]
        checks.append((f"omega*phi({key})", abs(v - ref) <= 1e-8, f"{v:.10f}"))
    worst = 0.0
    for a in range(-2, 3):
        for b in range(-2, 3):
            for s in range(-1, 2):
                Pt, Qt = dio.E.combination(a, b), dio.E.combination(s, 1)
                S = dio.add(Pt, Qt)
                if any(not X.is_infinity and X.x < dio.ellog.E1 for X in (Pt, Qt, S)):
                    continue
                lhs = dio.elliptic_log(S, per)
                rhs = dio.elliptic_log(Pt, per) + dio.elliptic_log(Qt, per)
                worst = max(worst, dio.circle_distance(lhs, rhs))
    checks.append(("homomorphism", worst <= 1e-7, f"{worst:.1e}"))
    checks.append(("c11", abs(c.c11 - 3.285408400) <= 1e-6, f"{c.c11:.10f}"))
    rel4 = abs(c.c4 / 2.043497279e110 - 1)
    checks.append(("c4", rel4 <= 1e-6, f"rel err {rel4:.1e}"))
    dlog = abs(math.log10(c.M) - math.log10(6.123e59))
    checks.append(("M", dlog <= 0.3, f"{c.M:.4e}"))
    verdict(7, checks)


def test_criterion_08_birational():
    X1T = dio.birational_X(1, dio.T)
    X1R = dio.birational_X(1, dio.R1)
    on_q = all(dio.on_quartic(*dio.birational_X(v, P)) for v in (1, 2) for P in (dio.R1, dio.R2, dio.T))
    rec = {e: {x for x in dio.recover_d(e, math.isqrt(dio.quartic_value(e))) if x is not None} for e in (2, 4, 8)}
    verdict(8, [("X1(5,0)", X1T == (0, 3), "({}, {})".format(*X1T)),
                ("X1(9,4)", X1R == (2, -9), "({}, {})".format(*X1R)),
                ("quartic", on_q, "exact"),
                ("d-recovery", rec == {2: {6, 3}, 4: {17, 6}, 8: {58, 17}}, str({e: sorted(v) for e, v in rec.items()}))])


def test_criterion_09_margulis_derivative():
    worst, ratios = 0.0, []
    for seed in range(50):
        rng = np.random.default_rng(seed)
        g = random_split_loxodromic(rng, 3, math.log(2), spread=1.0, max_cond=100)
        X = random_traceless(rng, 3)
        exact = margulis_a_part(g, X)
        err = {h: float(np.max(np.abs(jordan_variation_fd(g, X, h) - exact))) for h in (1e-3, 1e-4, 1e-5)}
        worst = max(worst, err[1e-5])
        ratios.append(err[1e-3] / err[1e-4])
    quad = min(ratios) > 50 and max(ratios) < 200
    verdict(9, [("fd at h=1e-5", worst <= 1e-5, f"worst {worst:.2e}"),
                ("O(h^2)", quad, f"err(1e-3)/err(1e-4) in [{min(ratios):.1f}, {max(ratios):.1f}]")])


def test_criterion_10_affine_ratio():
    # transverse: every projection in either route has operator norm <= 100
    checks = []
    for k, l in ((1, 1), (1, 2), (2, 1)):
        rng = np.random.default_rng(10 * k + l)
        worst = 0.0
        for _ in range(100):
            r = affine_ratio(*random_flag_pairs(rng, k, l))
            worst = max(worst, float(np.max(np.abs(r.translation - r.oracle_translation))))
        checks.append((f"(k,l)=({k},{l})", worst <= 1e-9, f"worst {worst:.1e}"))
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(100):
        r = affine_ratio(*random_flag_pairs(rng, 1, 1, base=rng.standard_normal(3)))
        worst = max(worst, float(np.max(np.abs(r.translation))))
    checks.append(("common point", worst <= 1e-12, f"worst {worst:.1e}"))
    verdict(10, checks)


def test_criterion_11_additivity_defect():
    monotone, final = [], []
    for seed in range(20):
        f, q = random_transverse_pair(np.random.default_rng(seed))
        errs = [additivity_defect(f, q, n).error for n in range(4, 11)]
        monotone.append(all(b <= a for a, b in zip(errs, errs[1:])))
        final.append(errs[-1])
    verdict(11, [("non-increasing n >= 4", all(monotone), f"{sum(monotone)}/20 pairs"),
                 ("error at n=10", max(final) <= 1e-6, f"worst {max(final):.1e}")])


def test_criterion_12_coboundary():
    worst, words = 0.0, 0
    for seed in range(10):
        s = sample_variation_cone(random_generators(3, 2, seed, "coboundary"), 8, seed)
        words += s.total
        worst = max([worst] + [float(np.max(np.abs(dl))) for _, _, dl in s.rows])
    verdict(12, [("dlambda", worst <= 1e-8, f"worst {worst:.1e} over {words} words")])
