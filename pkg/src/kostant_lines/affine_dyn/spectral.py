"""Jordan projections and the a-part of Margulis invariants."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

LOX_REL_TOL = 1e-8


class NotLoxodromicError(ValueError):
    """Eigenvalue moduli are not pairwise distinct (or eigenvalues not real)."""


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenbasis: np.ndarray | None
    loxodromic: bool


def _check_invertible(g: np.ndarray):
    s = np.linalg.svd(g, compute_uv=False)
    if not np.all(np.isfinite(s)) or s[-1] <= s[0] * 1e-15 * len(s):
        raise ValueError("matrix is singular")


def spectral_data(g, rel_tol: float = LOX_REL_TOL) -> SpectralData:
    """Eigenvalues sorted by decreasing modulus, with a real eigenbasis when loxodromic."""
    g = np.asarray(g, dtype=float)
    _check_invertible(g)
    w, P = np.linalg.eig(g)
    order = np.argsort(-np.abs(w), kind="stable")
    w, P = w[order], P[:, order]
    mod = np.abs(w)
    lox = bool(np.all(mod[1:] < mod[:-1] * (1 - rel_tol)))
    if lox:
        scale = np.abs(P).max(axis=0)
        lox = bool(np.all(np.abs(w.imag) <= 1e-12 * mod) and np.all(np.abs(P.imag).max(axis=0) <= 1e-10 * scale))
    return SpectralData(w, P.real.copy() if lox else None, lox)


def jordan_projection(g) -> np.ndarray:
    """Logarithms of eigenvalue moduli, sorted non-increasing."""
    g = np.asarray(g, dtype=float)
    _check_invertible(g)
    return np.sort(np.log(np.abs(np.linalg.eigvals(g))))[::-1]


def margulis_a_part(g, u) -> np.ndarray:
    """diag(P^-1 u P) for the eigenbasis P of g ordered by decreasing modulus."""
    g, u = np.asarray(g, dtype=float), np.asarray(u, dtype=float)
    if abs(np.trace(u)) > 1e-8 * max(1.0, np.abs(u).max()):
        raise ValueError("u must be traceless")
    sd = spectral_data(g)
    if not sd.loxodromic:
        raise NotLoxodromicError("g is not real-split loxodromic")
    P = sd.eigenbasis
    return np.diag(np.linalg.solve(P, u @ P)).copy()


def jordan_variation_fd(g, X, h: float) -> np.ndarray:
    """Central difference of the Jordan projection along exp(tX) g."""
    g, X = np.asarray(g, dtype=float), np.asarray(X, dtype=float)
    plus, minus = expm(h * X) @ g, expm(-h * X) @ g
    for m in (g, plus, minus):
        if not spectral_data(m).loxodromic:
            raise NotLoxodromicError("loxodromy lost along the perturbation")
    return (jordan_projection(plus) - jordan_projection(minus)) / (2 * h)


def random_split_loxodromic(rng, d: int, min_log_gap: float, spread: float = 0.5,
                            mixing: float = 0.6, max_cond: float | None = None) -> np.ndarray:
    """P diag(mu) P^-1 in SL(d) with positive mu and log-gaps in [min_log_gap, min_log_gap + spread).

    With ``max_cond`` the eigenbasis P is redrawn until cond(P) <= max_cond.
    """
    gaps = min_log_gap + spread * rng.random(d - 1)
    logs = np.concatenate([[0.0], -np.cumsum(gaps)])
    logs -= logs.mean()
    while True:
        P = np.eye(d) + mixing * rng.standard_normal((d, d))
        if max_cond is None or np.linalg.cond(P) <= max_cond:
            break
    return P @ np.diag(np.exp(logs)) @ np.linalg.inv(P)
