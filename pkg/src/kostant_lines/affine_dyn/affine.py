"""Affine maps, unnormalized Margulis invariants, fixed-point offsets and the
projection cross ratio.

The generalized 1-eigenspace O of the linear part is isolated with a sorted
real Schur form A = Z T Z^T (O first). The complementary invariant subspace W
is spanned by Z [X; I] where T11 X - X T22 = -T12, so no Jordan form is ever
formed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur, solve_sylvester


class AmbiguousClusterError(ValueError):
    """An eigenvalue lies in the grey zone (tol, 2 tol) around 1."""


@dataclass(frozen=True)
class AffineMap:
    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        L = np.array(self.linear, dtype=float)
        v = np.array(self.translation, dtype=float).reshape(-1)
        if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] != v.shape[0]:
            raise ValueError("linear part must be d x d and translation length d")
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "translation", v)

    @property
    def dim(self) -> int:
        return self.translation.shape[0]

    def __call__(self, x) -> np.ndarray:
        return self.linear @ np.asarray(x, dtype=float) + self.translation

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    def inverse(self) -> "AffineMap":
        Li = np.linalg.inv(self.linear)
        return AffineMap(Li, -Li @ self.translation)

    def conjugate(self, h) -> "AffineMap":
        """h f h^-1 for a linear map h."""
        h = np.asarray(h, dtype=float)
        return AffineMap(h @ self.linear @ np.linalg.inv(h), h @ self.translation)

    def to_dict(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "AffineMap":
        return cls(np.array(data["linear"], dtype=float), np.array(data["translation"], dtype=float))


def load_affine_maps(text: str) -> list:
    data = json.loads(text)
    items = data["maps"] if isinstance(data, dict) else data
    return [AffineMap.from_dict(m) for m in items]


@dataclass(frozen=True)
class UnipotentSplitting:
    Z: np.ndarray        # orthogonal Schur vectors
    k: int               # dim O
    X: np.ndarray        # coupling block, W = Z [X; I]
    T22: np.ndarray      # linear part on W in the basis Z [X; I]

    @property
    def O_basis(self) -> np.ndarray:
        return self.Z[:, :self.k]

    @property
    def W_basis(self) -> np.ndarray:
        n = self.Z.shape[0]
        return self.Z @ np.vstack([self.X, np.eye(n - self.k)])

    def split(self, v) -> tuple:
        """(O-component, W-coordinates) of v."""
        y = self.Z.T @ np.asarray(v, dtype=float)
        top, bot = y[:self.k], y[self.k:]
        return self.O_basis @ (top - self.X @ bot), bot


def unipotent_splitting(L, tol: float) -> UnipotentSplitting:
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if tol <= 0:
        raise ValueError("tol must be positive")
    dist = np.abs(np.linalg.eigvals(L) - 1)
    if np.any((dist > tol) & (dist < 2 * tol)):
        raise AmbiguousClusterError(f"eigenvalue at distance {dist[(dist > tol) & (dist < 2 * tol)].min():.3g} from 1")
    T, Z, k = schur(L, output="real", sort=lambda re, im: abs(complex(re, im) - 1) <= tol)
    if k in (0, n):
        X = np.zeros((k, n - k))
    else:
        X = solve_sylvester(T[:k, :k], -T[k:, k:], -T[:k, k:])
    return UnipotentSplitting(Z, k, X, T[k:, k:])


def unnormalized_margulis(f: AffineMap, tol: float = 1e-6) -> np.ndarray:
    """Projection of the translation onto O (eigenvalues within tol of 1) parallel to W."""
    sp = unipotent_splitting(f.linear, tol)
    return sp.split(f.translation)[0]


def fixed_point_offset(f: AffineMap, tol: float = 1e-6) -> np.ndarray:
    """o in W with f(o) - o in O."""
    sp = unipotent_splitting(f.linear, tol)
    _, bot = sp.split(f.translation)
    n = f.dim
    if sp.k == n:
        return np.zeros(n)
    M = sp.T22 - np.eye(n - sp.k)
    if np.linalg.cond(M) > 1e12:
        raise ValueError("linear part minus identity is near-singular on W")
    o = sp.W_basis @ np.linalg.solve(M, -bot)
    resid = sp.split(f(o) - o)[1]
    scale = max(1.0, np.linalg.norm(f.translation), np.linalg.norm(o))
    if np.linalg.norm(resid) > 1e-8 * scale:
        raise ArithmeticError("fixed point offset failed its post-check")
    return o


def _basis(U) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    return U.reshape(-1, 1) if U.ndim == 1 else U


def projection(U, W, cond_max: float = 1e12) -> np.ndarray:
    """Matrix of the projection onto span U parallel to span W."""
    U, W = _basis(U), _basis(W)
    M = np.hstack([U, W])
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"dimensions {U.shape[1]} + {W.shape[1]} do not fill R^{M.shape[0]}")
    if np.linalg.cond(M) > cond_max:
        raise ValueError("subspaces are not transverse")
    return U @ np.linalg.inv(M)[:U.shape[1]]


def cross_ratio_B1(line, V_hyp, r, W_hyp) -> float:
    """trace(pi_{line, V_hyp} pi_{r, W_hyp})."""
    projection(line, W_hyp)
    projection(r, V_hyp)
    return float(np.trace(projection(line, V_hyp) @ projection(r, W_hyp)))
