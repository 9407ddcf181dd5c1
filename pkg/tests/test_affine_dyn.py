import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from kostant_lines.affine_dyn import (AffineFlagPair, AffineMap, AmbiguousClusterError, NotLoxodromicError,
                                      additivity_defect, affine_ratio, circuit, cross_ratio_B1,
                                      fixed_point_offset, jordan_projection, jordan_variation_fd,
                                      load_affine_maps, margulis_a_part, random_flag_pairs, random_generators,
                                      random_split_loxodromic, random_traceless, random_transverse_pair,
                                      sample_variation_cone, spectral_data, transversality_margin,
                                      unnormalized_margulis, word_label)

seeds = st.integers(0, 2**32 - 1)


def rng_of(seed):
    return np.random.default_rng(seed)


def random_gl(rng, d):
    while True:
        h = rng.standard_normal((d, d))
        if np.linalg.cond(h) < 50:
            return h


def random_affine_with_unit_eigenvalue(rng, d=3):
    h = random_gl(rng, d)
    L = h @ np.diag([2.0, 1.0, 0.4]) @ np.linalg.inv(h)
    return AffineMap(L, rng.standard_normal(d))


# Jordan projection

def test_jordan_projection_diagonal():
    np.testing.assert_allclose(jordan_projection(np.diag([4, 2, 1 / 8])), [math.log(4), math.log(2), -math.log(8)])


@given(seeds)
def test_jordan_projection_invariants(seed):
    rng = rng_of(seed)
    g = random_split_loxodromic(rng, 3, math.log(2))
    h = random_gl(rng, 3)
    lam = jordan_projection(g)
    np.testing.assert_allclose(jordan_projection(h @ g @ np.linalg.inv(h)), lam, atol=1e-9)
    np.testing.assert_allclose(jordan_projection(g @ g), 2 * lam, atol=1e-9)


def test_non_loxodromic_rejected():
    assert not spectral_data(np.diag([2.0, 2.0, 0.25])).loxodromic
    with pytest.raises(NotLoxodromicError):
        margulis_a_part(np.diag([2.0, 2.0, 0.25]), np.zeros((3, 3)))
    rot = np.array([[0.0, -2, 0], [2, 0, 0], [0, 0, 0.25]])
    with pytest.raises(NotLoxodromicError):
        margulis_a_part(rot, np.zeros((3, 3)))
    assert spectral_data(np.diag([3.0, 1.0, 1 / 3])).loxodromic


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        jordan_projection(np.diag([1.0, 0.0, 2.0]))


# a-part of the Margulis invariant

def test_a_part_diagonal():
    u = np.array([[1.0, 2, 3], [4, -3, 5], [6, 7, 2]])
    np.testing.assert_allclose(margulis_a_part(np.diag([5, 1, 0.2]), u), [1, -3, 2])
    with pytest.raises(ValueError):
        margulis_a_part(np.diag([5, 1, 0.2]), np.eye(3))


@given(seeds)
def test_a_part_scaling_invariance(seed):
    rng = rng_of(seed)
    d = 3
    mu = np.array([6.0, 1.5, 1 / 9])
    P = random_gl(rng, d)
    g = P @ np.diag(mu) @ np.linalg.inv(P)
    u = random_traceless(rng, d)
    S = np.diag(rng.uniform(0.2, 5, d) * rng.choice([-1, 1], d))
    Ps = P @ S
    direct = np.diag(np.linalg.inv(Ps) @ u @ Ps)
    np.testing.assert_allclose(margulis_a_part(g, u), direct, atol=1e-12 * max(1, np.abs(u).max()) * np.linalg.cond(P))


def test_fd_diagonal_case():
    g = np.diag([8, 2, 1 / 16])
    X = np.diag([0.3, -0.1, -0.2])
    np.testing.assert_allclose(jordan_variation_fd(g, X, 1e-4), np.diag(X), atol=1e-10)
    X = random_traceless(rng_of(0), 3)
    np.testing.assert_allclose(jordan_variation_fd(g, X, 1e-5), margulis_a_part(g, X), atol=1e-5)


def test_fd_richardson_decay():
    rng = rng_of(7)
    g = random_split_loxodromic(rng, 3, math.log(2), spread=1.0, max_cond=100)
    X = random_traceless(rng, 3)
    exact = margulis_a_part(g, X)
    e3, e4 = (np.abs(jordan_variation_fd(g, X, h) - exact).max() for h in (1e-3, 1e-4))
    assert 50 < e3 / e4 < 200


# unnormalized Margulis invariant and fixed point offset

def test_margulis_identity_and_diagonal():
    v = np.array([1.0, -2.0, 3.0])
    np.testing.assert_allclose(unnormalized_margulis(AffineMap(np.eye(3), v)), v)
    np.testing.assert_allclose(unnormalized_margulis(AffineMap(np.diag([2, 1, 0.5]), v)), [0, -2, 0], atol=1e-14)
    np.testing.assert_allclose(unnormalized_margulis(AffineMap(np.diag([2, 3, 0.5]), v)), 0, atol=1e-14)


@given(seeds)
def test_margulis_equivariance_and_inverse(seed):
    rng = rng_of(seed)
    f = random_affine_with_unit_eigenvalue(rng)
    h = random_gl(rng, 3)
    m = unnormalized_margulis(f)
    np.testing.assert_allclose(unnormalized_margulis(f.conjugate(h)), h @ m, atol=1e-8)
    np.testing.assert_allclose(unnormalized_margulis(f.inverse()), -m, atol=1e-8)


@given(seeds)
def test_margulis_unchanged_by_translation_conjugacy(seed):
    rng = rng_of(seed)
    f = random_affine_with_unit_eigenvalue(rng)
    u = rng.standard_normal(3)
    g = AffineMap(f.linear, f.translation + u - f.linear @ u)
    np.testing.assert_allclose(unnormalized_margulis(g), unnormalized_margulis(f), atol=1e-8)


def test_ambiguous_cluster():
    with pytest.raises(AmbiguousClusterError):
        unnormalized_margulis(AffineMap(np.diag([2, 1 + 1.5e-6, 0.5]), np.ones(3)), tol=1e-6)


def test_fixed_point_offset_frozen():
    # (L - I) o = -v with L = diag(2, 1/2), v = (1, 1)
    f = AffineMap(np.diag([2, 0.5]), np.array([1.0, 1.0]))
    o = fixed_point_offset(f)
    np.testing.assert_allclose(o, [-1, 2], atol=1e-14)
    np.testing.assert_allclose(f(o), o, atol=1e-14)
    g = AffineMap(np.diag([2, 1, 0.5]), np.array([0, 3.0, 0]))
    np.testing.assert_allclose(fixed_point_offset(g), 0, atol=1e-14)


@given(seeds)
def test_fixed_point_offset_postcondition(seed):
    rng = rng_of(seed)
    f = random_affine_with_unit_eigenvalue(rng)
    o = fixed_point_offset(f)
    m = unnormalized_margulis(f)
    np.testing.assert_allclose(f(o) - o, m, atol=1e-8)


def test_affine_map_algebra_and_json():
    rng = rng_of(3)
    f = AffineMap(random_gl(rng, 3), rng.standard_normal(3))
    g = AffineMap(random_gl(rng, 3), rng.standard_normal(3))
    x = rng.standard_normal(3)
    np.testing.assert_allclose((f @ g)(x), f(g(x)))
    np.testing.assert_allclose(f.inverse()(f(x)), x, atol=1e-12)
    import json
    maps = load_affine_maps(json.dumps({"maps": [f.to_dict(), g.to_dict()]}))
    np.testing.assert_array_equal(maps[0].linear, f.linear)
    assert len(load_affine_maps(json.dumps([g.to_dict()]))) == 1


# cross ratio

def test_cross_ratio_frozen():
    e1, e2 = np.array([[1.0], [0]]), np.array([[0.0], [1]])
    assert cross_ratio_B1(e1, e2, e1, e2) == pytest.approx(1)
    assert cross_ratio_B1(e1, e2, e1 + e2, e2) == pytest.approx(1)


@given(seeds)
def test_cross_ratio_gl_invariant(seed):
    rng = rng_of(seed)
    l, r = rng.standard_normal((3, 1)), rng.standard_normal((3, 1))
    V, W = rng.standard_normal((3, 2)), rng.standard_normal((3, 2))
    h = random_gl(rng, 3)
    a = cross_ratio_B1(l, V, r, W)
    b = cross_ratio_B1(h @ l, h @ V, h @ r, h @ W)
    assert b == pytest.approx(a, rel=1e-9, abs=1e-10)


def test_cross_ratio_rejects_non_transverse():
    e1, e2 = np.array([[1.0], [0]]), np.array([[0.0], [1]])
    with pytest.raises(ValueError):
        cross_ratio_B1(e1, e1, e2, e2)


# affine ratio

def flag_pair(rng, k, l, base=None):
    n = 2 * k + l
    plus, minus = rng.standard_normal((n, k + l)), rng.standard_normal((n, k + l))
    return AffineFlagPair(plus[:, :k], plus, minus[:, :k], minus, rng.standard_normal(n) if base is None else base)


@given(seeds, st.sampled_from([(1, 1), (1, 2), (2, 1)]))
def test_affine_ratio_routes_agree(seed, kl):
    rng = rng_of(seed)
    a, b = flag_pair(rng, *kl), flag_pair(rng, *kl)
    r = affine_ratio(a, b)
    # agreement is relative to the size of the answer, which blows up near non-transverse draws
    scale = max(1.0, np.linalg.norm(a.base - b.base), np.linalg.norm(r.translation))
    np.testing.assert_allclose(r.translation, r.oracle_translation, rtol=0, atol=1e-9 * scale)


@given(seeds, st.sampled_from([(1, 1), (1, 2), (2, 1)]))
def test_affine_ratio_absolute_under_margin(seed, kl):
    a, b = random_flag_pairs(rng_of(seed), *kl)
    assert transversality_margin(a, b) <= 100
    r = affine_ratio(a, b)
    np.testing.assert_allclose(r.translation, r.oracle_translation, rtol=0, atol=1e-9)


def test_affine_ratio_equal_bases_give_zero():
    rng = rng_of(11)
    p = rng.standard_normal(3)
    r = affine_ratio(flag_pair(rng, 1, 1, p), flag_pair(rng, 1, 1, p))
    assert np.abs(r.translation).max() <= 1e-12


@given(seeds)
def test_affine_ratio_common_point(seed):
    # both affine flags pass through p, with base points elsewhere on their neutral spaces
    rng = rng_of(seed)
    p = rng.standard_normal(3)
    a, b = flag_pair(rng, 1, 1, p), flag_pair(rng, 1, 1, p)
    x, y = a.neutral @ rng.standard_normal(a.neutral.shape[1]), b.neutral @ rng.standard_normal(b.neutral.shape[1])
    a2 = AffineFlagPair(a.small_plus, a.big_plus, a.small_minus, a.big_minus, p + x)
    b2 = AffineFlagPair(b.small_plus, b.big_plus, b.small_minus, b.big_minus, p + y)
    r = affine_ratio(a2, b2)
    # the holonomy fixes p, so in coordinates centred at p + x its translation is (L - I)(-x)
    np.testing.assert_allclose(circuit(a2, b2, -x), -x, atol=1e-9)
    xc = r.basis.T @ -x
    np.testing.assert_allclose(r.translation, xc - r.linear @ xc, atol=1e-9)


def test_flag_pair_validation():
    rng = rng_of(0)
    P = rng.standard_normal((3, 2))
    with pytest.raises(ValueError):
        AffineFlagPair(P[:, :1], P, P[:, 1:], P, np.zeros(3))
    with pytest.raises(ValueError):
        AffineFlagPair(rng.standard_normal((3, 1)), P, P[:, :1], P, np.zeros(3))


# additivity defect

def test_defect_commuting_diagonal():
    g = np.diag([5.0, 1.0, 0.2])
    q = np.diag([3.0, 1.0, 1 / 3])
    u = np.diag([0.5, -0.25, -0.25])
    for n in (1, 3, 5):
        r = additivity_defect((g, u), (q, u), n)
        np.testing.assert_allclose(r.defect, 0, atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_defect_converges_gap_four(seed):
    f, q = random_transverse_pair(rng_of(seed), 3, math.log(4))
    errs = [additivity_defect(f, q, n).error for n in range(4, 11)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_defect_prediction_symmetric_in_argument_order():
    f, q = random_transverse_pair(rng_of(2))
    r = additivity_defect(f, q, 8)
    np.testing.assert_allclose(r.prediction, r.prediction_swapped, atol=1e-8)
    assert r.dps >= 30


def test_log_contraction_tracks_error():
    f, q = random_transverse_pair(rng_of(4))
    rs = [additivity_defect(f, q, n) for n in (4, 8)]
    assert rs[1].log_contraction_f < rs[0].log_contraction_f
    assert rs[1].error < rs[0].error


# variation cone

def test_word_labels():
    assert word_label((0, 1, 2, 3)) == "aAbB"
    assert word_label(()) == "e"


def test_zero_cocycle():
    s = sample_variation_cone(random_generators(3, 2, 0, "zero"), 4, workers=1)
    assert s.rows and all(np.abs(dl).max() == 0 for _, _, dl in s.rows)


@pytest.mark.parametrize("seed", range(3))
def test_coboundary_cocycle(seed):
    s = sample_variation_cone(random_generators(3, 2, seed, "coboundary"), 5, workers=1)
    assert max(np.abs(dl).max() for _, _, dl in s.rows) <= 1e-8


def test_enumeration_counts_and_determinism():
    gens = random_generators(3, 2, 5, "random")
    s1 = sample_variation_cone(gens, 4, workers=1)
    s2 = sample_variation_cone(gens, 4, workers=2)
    # 4 * 3^(L-1) reduced words of length L in a free group of rank 2
    assert s1.total == sum(4 * 3 ** (L - 1) for L in range(1, 5))
    assert [w for w, _, _ in s1.rows] == [w for w, _, _ in s2.rows]
    for (_, l1, d1), (_, l2, d2) in zip(s1.rows, s2.rows):
        np.testing.assert_array_equal(l1, l2)
        np.testing.assert_array_equal(d1, d2)


def test_cocycle_rule_matches_direct_product():
    gens = random_generators(3, 2, 9, "random")
    (g, u), (h, v) = gens
    s = sample_variation_cone(gens, 2, workers=1)
    row = {w: dl for w, _, dl in s.rows}
    if (0, 2) in row:
        uu = u + g @ v @ np.linalg.inv(g)
        np.testing.assert_allclose(row[(0, 2)], margulis_a_part(g @ h, uu), atol=1e-12)


def test_variation_of_powers_is_additive_in_limit():
    rng = rng_of(1)
    g = random_split_loxodromic(rng, 3, math.log(2), spread=0.3, max_cond=20)
    h = random_split_loxodromic(rng, 3, math.log(2), spread=0.3, max_cond=20)
    u, v = random_traceless(rng, 3), random_traceless(rng, 3)
    target = margulis_a_part(g, u) + margulis_a_part(h, v)
    errs = []
    for m in range(1, 7):
        gm, hm = np.linalg.matrix_power(g, m), np.linalg.matrix_power(h, m)
        um = sum(np.linalg.matrix_power(g, i) @ u @ np.linalg.matrix_power(g, -i) for i in range(m))
        vm = sum(np.linalg.matrix_power(h, i) @ v @ np.linalg.matrix_power(h, -i) for i in range(m))
        w = um + gm @ vm @ np.linalg.inv(gm)
        errs.append(np.abs(margulis_a_part(gm @ hm, w) / m - target).max())
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_random_generators_validation():
    with pytest.raises(ValueError):
        random_generators(3, 2, 0, "bogus")
    g, _ = random_generators(3, 1, 0)[0]
    assert abs(np.linalg.det(g) - 1) < 1e-12
