"""Affine ratio of four transverse affine flags and the additivity defect of
Margulis invariants in the adjoint-affine setting.

A pair of transverse affine flags is stored as linear data (a+, A+), (a-, A-)
with a+ in A+, a- in A-, plus a base point lying on both affine subspaces
base + A+ and base + A-. For pairs X = (a, A) + w and Y = (b, B) + v the
circuit starts on w + A0 (A0 = A+ cap A-) and moves parallel to a-, b+, b-,
a+ in turn, landing back on w + A0. Its translation part has the closed form
pi^{A0, a+ + b-} pi^{b+ + a-, B0} (v - w).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.linalg import null_space, orth

from ..liealg import VerificationError
from .affine import AffineMap, _basis, fixed_point_offset, projection
from .spectral import NotLoxodromicError, spectral_data

RATIO_TOL = 1e-9


def intersect(U, W) -> np.ndarray:
    """Orthonormal basis of span U cap span W."""
    U, W = _basis(U), _basis(W)
    N = null_space(np.hstack([U, -W]))
    if N.size == 0:
        return np.zeros((U.shape[0], 0))
    return orth(U @ N[:U.shape[1]])


@dataclass(frozen=True)
class AffineFlagPair:
    small_plus: np.ndarray
    big_plus: np.ndarray
    small_minus: np.ndarray
    big_minus: np.ndarray
    base: np.ndarray

    def __post_init__(self):
        for name in ("small_plus", "big_plus", "small_minus", "big_minus"):
            object.__setattr__(self, name, _basis(getattr(self, name)))
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float).reshape(-1))
        k, K = self.small_plus.shape[1], self.big_plus.shape[1]
        if self.small_minus.shape[1] != k or self.big_minus.shape[1] != K or K < k:
            raise ValueError("flag pair has inconsistent dimensions")
        for s, b in ((self.small_plus, self.big_plus), (self.small_minus, self.big_minus)):
            if np.linalg.matrix_rank(np.hstack([b, s]), tol=1e-9 * max(1.0, np.abs(b).max())) != K:
                raise ValueError("small subspace is not inside the big one")
        projection(self.small_plus, self.big_minus)
        projection(self.small_minus, self.big_plus)

    @property
    def shape(self) -> tuple:
        k = self.small_plus.shape[1]
        return k, self.big_plus.shape[1] - k

    @property
    def neutral(self) -> np.ndarray:
        return intersect(self.big_plus, self.big_minus)


@dataclass(frozen=True)
class AffineRatio:
    linear: np.ndarray         # l x l, in the orthonormal basis `basis` of A0
    translation: np.ndarray    # l-vector in the same basis (closed form)
    oracle_translation: np.ndarray
    basis: np.ndarray
    vector: np.ndarray         # closed-form translation as a vector of V


def circuit(a: AffineFlagPair, b: AffineFlagPair, u) -> np.ndarray:
    """Four parallel translations starting at a.base + u; returns the endpoint minus a.base."""
    w, v = a.base, b.base
    p = w + np.asarray(u, dtype=float)
    p = p - projection(a.small_minus, b.big_plus) @ (p - v)
    p = p - projection(b.small_plus, b.big_minus) @ (p - v)
    p = p - projection(b.small_minus, a.big_plus) @ (p - w)
    p = p - projection(a.small_plus, a.big_minus) @ (p - w)
    return p - w


def ratio_translation_closed(a: AffineFlagPair, b: AffineFlagPair) -> np.ndarray:
    A0, B0 = a.neutral, b.neutral
    first = projection(np.hstack([b.small_plus, a.small_minus]), B0)
    second = projection(A0, np.hstack([a.small_plus, b.small_minus]))
    return second @ first @ (b.base - a.base)


def affine_ratio(a: AffineFlagPair, b: AffineFlagPair, tol: float = RATIO_TOL) -> AffineRatio:
    if a.shape != b.shape or a.base.shape != b.base.shape:
        raise ValueError("flag pairs must share the (k, l) shape")
    Q = a.neutral
    if Q.shape[1] != a.shape[1]:
        raise ValueError("big subspaces do not meet in the expected dimension")
    closed = ratio_translation_closed(a, b)
    oracle = circuit(a, b, np.zeros_like(a.base))
    # roundoff grows with the size of the answer near non-transverse configurations
    scale = max(1.0, float(np.linalg.norm(b.base - a.base)), float(np.linalg.norm(closed)))
    if np.linalg.norm(closed - oracle) > tol * scale:
        raise VerificationError(f"affine ratio closed form and circuit differ by {np.linalg.norm(closed - oracle):.3g}")
    cols = [Q.T @ (circuit(a, b, Q[:, i]) - oracle) for i in range(Q.shape[1])]
    linear = np.column_stack(cols) if cols else np.zeros((0, 0))
    return AffineRatio(linear, Q.T @ closed, Q.T @ oracle, Q, closed)


def transversality_margin(a: AffineFlagPair, b: AffineFlagPair) -> float:
    """Largest operator norm among the projections used by the two routes."""
    pairs = [(a.small_minus, b.big_plus), (b.small_plus, b.big_minus), (b.small_minus, a.big_plus),
             (a.small_plus, a.big_minus), (np.hstack([b.small_plus, a.small_minus]), b.neutral),
             (a.neutral, np.hstack([a.small_plus, b.small_minus]))]
    return max(float(np.linalg.norm(projection(U, W), 2)) for U, W in pairs)


def random_flag_pairs(rng, k: int, l: int, max_margin: float = 100.0, base=None, max_tries: int = 1000) -> tuple:
    """Two Gaussian affine flag pairs in R^(2k+l) whose transversality margin is at most max_margin."""
    n = 2 * k + l
    for _ in range(max_tries):
        out = []
        for _ in range(2):
            plus, minus = rng.standard_normal((n, k + l)), rng.standard_normal((n, k + l))
            p = rng.standard_normal(n) if base is None else np.asarray(base, dtype=float)
            out.append(AffineFlagPair(plus[:, :k], plus, minus[:, :k], minus, p))
        if transversality_margin(*out) <= max_margin:
            return tuple(out)
    raise RuntimeError("no sufficiently transverse configuration found")


# adjoint-affine setting on sl_d

def sl_basis(d: int) -> np.ndarray:
    """Frobenius-orthonormal basis of sl_d as columns of flattened matrices.

    Off-diagonal units E_ij (i != j, row-major) first, then d-1 orthonormal
    traceless diagonal matrices.
    """
    cols = []
    for i in range(d):
        for j in range(d):
            if i != j:
                m = np.zeros((d, d))
                m[i, j] = 1
                cols.append(m.ravel())
    H = np.zeros((d, d - 1))
    for i in range(d - 1):
        H[i, i], H[i + 1, i] = 1, -1
    for c in orth(H).T:
        cols.append(np.diag(c).ravel())
    return np.column_stack(cols)


def to_coords(Y, basis) -> np.ndarray:
    return basis.T @ np.asarray(Y, dtype=float).ravel()


def from_coords(c, basis, d: int) -> np.ndarray:
    return (basis @ c).reshape(d, d)


def adjoint_matrix(g, basis) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    d = g.shape[0]
    gi = np.linalg.inv(g)
    return np.column_stack([to_coords(g @ from_coords(c, basis, d) @ gi, basis) for c in np.eye(basis.shape[1])])


@dataclass(frozen=True)
class AdjointFlags:
    P: np.ndarray
    eigenvalues: np.ndarray
    plus: np.ndarray      # span P E_ij P^-1, i < j (expanded by Ad g)
    minus: np.ndarray     # span P E_ij P^-1, i > j
    neutral: np.ndarray   # P a P^-1
    offset: np.ndarray    # fixed point offset of Y -> Ad(g) Y + u, in coordinates


def adjoint_flags(g, u, basis, tol: float = 1e-6) -> AdjointFlags:
    g = np.asarray(g, dtype=float)
    d = g.shape[0]
    sd = spectral_data(g)
    if not sd.loxodromic:
        raise NotLoxodromicError("linear part is not real-split loxodromic")
    P = sd.eigenbasis
    Pi = np.linalg.inv(P)

    def conj(m):
        return to_coords(P @ m @ Pi, basis)

    def unit(i, j):
        m = np.zeros((d, d))
        m[i, j] = 1
        return m

    plus = np.column_stack([conj(unit(i, j)) for i in range(d) for j in range(d) if i < j])
    minus = np.column_stack([conj(unit(i, j)) for i in range(d) for j in range(d) if i > j])
    H = orth(np.vstack([np.eye(d - 1), np.zeros(d - 1)]) - np.vstack([np.zeros(d - 1), np.eye(d - 1)]))
    neutral = np.column_stack([conj(np.diag(h)) for h in H.T])
    f = AffineMap(adjoint_matrix(g, basis), to_coords(u, basis))
    return AdjointFlags(P, sd.eigenvalues.real, plus, minus, neutral, fixed_point_offset(f, tol))


def _common_point(U1, o1, U2, o2) -> np.ndarray:
    x = np.linalg.lstsq(np.hstack([U1, -U2]), o2 - o1, rcond=None)[0]
    return o1 + U1 @ x[:U1.shape[1]]


def flag_pair(attract: AdjointFlags, repel: AdjointFlags) -> AffineFlagPair:
    """(x+, X+) from the expanding flag of one element, (x-, X-) from the contracting flag of another."""
    big_plus = np.hstack([attract.plus, attract.neutral])
    big_minus = np.hstack([repel.minus, repel.neutral])
    base = _common_point(big_plus, attract.offset, big_minus, repel.offset)
    return AffineFlagPair(attract.plus, big_plus, repel.minus, big_minus, base)


def _normalizer(Pa, Pr) -> np.ndarray:
    """Columns c_k spanning <Pa_1..Pa_k> cap <Pr_k..Pr_d>."""
    d = Pa.shape[0]
    cols = []
    for k in range(1, d + 1):
        c = intersect(Pa[:, :k], Pr[:, k - 1:])
        if c.shape[1] != 1:
            raise ValueError("eigenflags are not transverse")
        cols.append(c[:, 0])
    return np.column_stack(cols)


def ratio_prediction(ff: AdjointFlags, fq: AdjointFlags, basis) -> tuple:
    """Diagonal part of the translation affine ratio for the pairs (F+, Q-) and (Q+, F-)."""
    d = ff.P.shape[0]
    r = ratio_translation_closed(flag_pair(ff, fq), flag_pair(fq, ff))
    X = from_coords(r, basis, d)
    h = _normalizer(ff.P, fq.P)
    return np.diag(np.linalg.solve(h, X @ h)).copy()


def log_contraction(flags: AdjointFlags, n: int, basis) -> float:
    """log of the affine contraction of the n-th power, |Ad g^n on g-| |Ad g^-n on G+| e^|o|.

    Reported as a logarithm because e^|o| overflows for large offsets.
    """
    d = flags.P.shape[0]
    P, mu = flags.P, flags.eigenvalues
    Pi = np.linalg.inv(P)
    ratio = np.array([[(abs(mu[i]) / abs(mu[j])) ** n for j in range(d)] for i in range(d)])
    sign = np.sign(np.outer(mu, 1 / mu)) ** n

    def restricted_norm(span, mask, power):
        Q = orth(span)
        images = []
        for c in Q.T:
            Z = Pi @ from_coords(c, basis, d) @ P
            Z = np.where(mask, Z, 0.0) * (sign * ratio) ** power
            images.append(to_coords(P @ Z @ Pi, basis))
        return np.linalg.norm(np.column_stack(images), 2)

    lower = np.tril(np.ones((d, d), bool), -1)
    upper_diag = ~lower
    a = restricted_norm(flags.minus, lower, 1)
    b = restricted_norm(np.hstack([flags.plus, flags.neutral]), upper_diag, -1)
    return float(math.log(a) + math.log(b) + np.linalg.norm(flags.offset))


# high precision evaluation of Margulis a-parts of long products

def _mp_apart(G, U, d):
    E, ER = mpmath.eig(G)
    order = sorted(range(d), key=lambda i: -abs(E[i]))
    P = mpmath.matrix(d, d)
    for k, i in enumerate(order):
        for r in range(d):
            P[r, k] = ER[r, i]
    Y = mpmath.inverse(P) * U * P
    return [mpmath.re(Y[i, i]) for i in range(d)]


def _mp_power(g, u, n, d):
    G, U = mpmath.eye(d), mpmath.zeros(d, d)
    for _ in range(n):
        U = U + G * u * mpmath.inverse(G)
        G = G * g
    return G, U


def _mp_sorted_eig(G, d):
    E, ER = mpmath.eig(G)
    order = sorted(range(d), key=lambda i: -abs(E[i]))
    P = mpmath.matrix(d, d)
    for k, i in enumerate(order):
        for r in range(d):
            P[r, k] = mpmath.re(ER[r, i])
    return [mpmath.re(E[i]) for i in order], P


def _mp_hstack(*blocks):
    cols = [blk[:, j] for blk in blocks for j in range(blk.cols)]
    M = mpmath.matrix(cols[0].rows, len(cols))
    for j, c in enumerate(cols):
        for i in range(c.rows):
            M[i, j] = c[i]
    return M


def _mp_columns(M, idx):
    return _mp_hstack(*[M[:, j] for j in idx])


def _mp_null(M, k):
    """Basis (as columns) of the k-dimensional null space of M."""
    _, S, V = mpmath.svd_r(M, full_matrices=True)
    n = V.rows
    return _mp_hstack(*[V[i, :].T for i in range(n - k, n)])


def _mp_projection(U, W):
    Mi = mpmath.inverse(_mp_hstack(U, W))
    return U * Mi[0:U.cols, :]


def _mp_prediction(gf, uf, gq, uq, d):
    """Affine-ratio prediction for the pairs (F+, Q-), (Q+, F-) in working precision.

    Flags and offsets come from the eigen-coordinates, where Ad(g) is diagonal
    and the offset has entries -Z_ij / (mu_i/mu_j - 1).
    """
    def coords(Y):
        return [Y[i, j] for i in range(d) for j in range(d) if i != j] + [Y[i, i] for i in range(d - 1)]

    def col(vals):
        m = mpmath.matrix(len(vals), 1)
        for i, x in enumerate(vals):
            m[i] = x
        return m

    def unit(i, j):
        m = mpmath.zeros(d, d)
        m[i, j] = 1
        return m

    data = []
    for g, u in ((gf, uf), (gq, uq)):
        mu, P = _mp_sorted_eig(g, d)
        Pi = mpmath.inverse(P)
        Z = Pi * u * P
        O = mpmath.zeros(d, d)
        for i in range(d):
            for j in range(d):
                if i != j:
                    O[i, j] = -Z[i, j] / (mu[i] / mu[j] - 1)
        plus = _mp_hstack(*[col(coords(P * unit(i, j) * Pi)) for i in range(d) for j in range(d) if i < j])
        minus = _mp_hstack(*[col(coords(P * unit(i, j) * Pi)) for i in range(d) for j in range(d) if i > j])
        neutral = _mp_hstack(*[col(coords(P * (unit(i, i) - unit(i + 1, i + 1)) * Pi)) for i in range(d - 1)])
        data.append((P, plus, minus, neutral, col(coords(P * O * Pi))))
    (Pf, fp, fm, fn, of), (Pq, qp, qm, qn, oq) = data

    def common(U1, o1, U2, o2):
        M = _mp_hstack(U1, -U2)
        x = M.T * mpmath.lu_solve(M * M.T, o2 - o1)
        return o1 + U1 * x[0:U1.cols, 0]

    def meet(U, W, k):
        N = _mp_null(_mp_hstack(U, -W), k)
        return U * N[0:U.cols, :]

    Ap, Am, Bp, Bm = _mp_hstack(fp, fn), _mp_hstack(qm, qn), _mp_hstack(qp, qn), _mp_hstack(fm, fn)
    w, v = common(Ap, of, Am, oq), common(Bp, oq, Bm, of)
    A0, B0 = meet(Ap, Am, d - 1), meet(Bp, Bm, d - 1)
    r = _mp_projection(A0, _mp_hstack(fp, fm)) * _mp_projection(_mp_hstack(qp, qm), B0) * (v - w)
    X = mpmath.zeros(d, d)
    idx = 0
    for i in range(d):
        for j in range(d):
            if i != j:
                X[i, j] = r[idx]
                idx += 1
    for i in range(d - 1):
        X[i, i] = r[idx]
        idx += 1
    X[d - 1, d - 1] = -sum(X[i, i] for i in range(d - 1))
    h = _mp_hstack(*[meet(_mp_columns(Pf, range(k)), _mp_columns(Pq, range(k - 1, d)), 1) for k in range(1, d + 1)])
    Y = mpmath.inverse(h) * X * h
    return [Y[i, i] for i in range(d)]


@dataclass(frozen=True)
class DefectResult:
    n: int
    defect: np.ndarray
    prediction: np.ndarray
    prediction_swapped: np.ndarray
    prediction_double: np.ndarray
    error: float
    log_contraction_f: float
    log_contraction_q: float
    dps: int


PREDICTION_DPS = 50
_PREDICTIONS: dict = {}


def _cached_predictions(gf, uf, gq, uq):
    """Both argument orders of the prediction, as mpf lists at PREDICTION_DPS."""
    key = b"".join(np.ascontiguousarray(x).tobytes() for x in (gf, uf, gq, uq))
    if key not in _PREDICTIONS:
        d = gf.shape[0]
        with mpmath.workdps(PREDICTION_DPS):
            mf, mq, muf, muq = (mpmath.matrix(x.tolist()) for x in (gf, gq, uf, uq))
            _PREDICTIONS[key] = (_mp_prediction(mf, muf, mq, muq, d), _mp_prediction(mq, muq, mf, muf, d))
        if len(_PREDICTIONS) > 256:
            _PREDICTIONS.pop(next(iter(_PREDICTIONS)))
    return _PREDICTIONS[key]


def _spread(g) -> float:
    m = np.abs(np.linalg.eigvals(g))
    return float(np.log(m.max() / m.min()))


def additivity_defect(f, q, n: int, dps: int | None = None, tol: float = 1e-6) -> DefectResult:
    """m(f^n q^n) - m(f^n) - m(q^n) against the affine-ratio prediction.

    ``f`` and ``q`` are pairs (g, u) with g in SL(d) and u in sl(d), acting on
    sl(d) by Y -> g Y g^-1 + u. The products are formed in mpmath at a working
    precision that covers the cancellation in the defect.
    """
    (gf, uf), (gq, uq) = ((np.asarray(a, float), np.asarray(b, float)) for a, b in (f, q))
    d = gf.shape[0]
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = sl_basis(d)
    ff, fq = adjoint_flags(gf, uf, basis, tol), adjoint_flags(gq, uq, basis, tol)
    pred_double = ratio_prediction(ff, fq, basis)
    pred, pred_swapped = _cached_predictions(gf, uf, gq, uq)
    if dps is None:
        dps = 30 + math.ceil(2 * n * (_spread(gf) + _spread(gq)) / math.log(10))
    with mpmath.workdps(dps):
        mf, mq = (mpmath.matrix(x.tolist()) for x in (gf, gq))
        muf, muq = (mpmath.matrix(x.tolist()) for x in (uf, uq))
        Gf, Uf = _mp_power(mf, muf, n, d)
        Gq, Uq = _mp_power(mq, muq, n, d)
        G = Gf * Gq
        U = Uf + Gf * Uq * mpmath.inverse(Gf)
        for M in (G, Gf, Gq):
            ev = sorted((abs(x) for x in mpmath.eig(M, left=False, right=False)), reverse=True)
            if any(ev[i + 1] >= ev[i] * (1 - mpmath.mpf(10) ** -8) for i in range(d - 1)):
                raise NotLoxodromicError(f"loxodromy lost at n={n}")
        parts = [_mp_apart(M, V, d) for M, V in ((G, U), (Gf, Uf), (Gq, Uq))]
        defect_mp = [a - b - c for a, b, c in zip(*parts)]
        err = float(max(abs(x - y) for x, y in zip(defect_mp, pred)))
        defect = np.array([float(x) for x in defect_mp])
    pred = np.array([float(x) for x in pred])
    pred_swapped = np.array([float(x) for x in pred_swapped])
    return DefectResult(n, defect, pred, pred_swapped, pred_double, err,
                        log_contraction(ff, n, basis), log_contraction(fq, n, basis), dps)


def random_transverse_pair(rng, d: int = 3, min_log_gap: float = math.log(10),
                           max_normalizer_cond: float = 100.0, max_tries: int = 1000) -> tuple:
    """Seeded pair ((g_f, u_f), (g_q, u_q)) with controlled flag transversality.

    Candidates are redrawn until both eigenflag normalizers (the two products
    f^n q^n and q^n f^n) have condition number at most ``max_normalizer_cond``.
    """
    from .cone import random_traceless
    from .spectral import random_split_loxodromic
    for _ in range(max_tries):
        gf = random_split_loxodromic(rng, d, min_log_gap)
        gq = random_split_loxodromic(rng, d, min_log_gap)
        uf, uq = random_traceless(rng, d), random_traceless(rng, d)
        Pf, Pq = spectral_data(gf).eigenbasis, spectral_data(gq).eigenbasis
        try:
            conds = [np.linalg.cond(_normalizer(Pf, Pq)), np.linalg.cond(_normalizer(Pq, Pf))]
        except ValueError:
            continue
        if max(conds) <= max_normalizer_cond:
            return (gf, uf), (gq, uq)
    raise RuntimeError("no transverse pair found")
