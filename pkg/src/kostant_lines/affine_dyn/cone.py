"""Jordan-variation sampling over reduced words in a free group.

Generators carry a linear part rho(gamma_i) and a cocycle value u(gamma_i);
words extend by u(gamma a) = u(gamma) + Ad(rho(gamma)) u(a), and the inverse
letter has u(gamma^-1) = -Ad(rho(gamma)^-1) u(gamma). The inverse of every
word is tracked as a product of inverse letters so Ad is never formed from a
numerically inverted long product.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .spectral import NotLoxodromicError, jordan_projection, margulis_a_part


@dataclass
class VariationSample:
    rows: list = field(default_factory=list)    # (word, lambda, dlambda)
    skipped: int = 0
    seed: int = 0

    @property
    def total(self) -> int:
        return len(self.rows) + self.skipped


def _letters(generators):
    out = []
    for g, u in generators:
        g, u = np.asarray(g, float), np.asarray(u, float)
        gi = np.linalg.inv(g)
        out.append((g, gi, u))
        out.append((gi, g, -gi @ u @ g))
    return out


def word_label(word) -> str:
    """Letters a, b, ... for generators and A, B, ... for their inverses."""
    return "".join(chr(ord("A" if i % 2 else "a") + i // 2) for i in word) or "e"


def _walk(args):
    letters, word_len, first = args
    rows, skipped = [], 0
    g, gi, u = letters[first]
    stack = [((first,), g, gi, u)]
    while stack:
        word, G, Gi, U = stack.pop()
        try:
            rows.append((word, jordan_projection(G), margulis_a_part(G, U)))
        except NotLoxodromicError:
            skipped += 1
        if len(word) == word_len:
            continue
        for a in range(len(letters) - 1, -1, -1):
            if a == (word[-1] ^ 1):
                continue
            g, gi, u = letters[a]
            stack.append((word + (a,), G @ g, gi @ Gi, U + G @ u @ Gi))
    return rows, skipped


def sample_variation_cone(generators, word_len: int, seed: int = 0, workers: int | None = None) -> VariationSample:
    """(lambda, dlambda) for every reduced word of length 1..word_len with loxodromic image.

    Enumeration is exhaustive and split by first letter; ``seed`` is recorded
    for provenance of randomly built generators.
    """
    letters = _letters(generators)
    if workers is None:
        workers = max(1, int(os.environ.get("KOSTANT_WORKERS", "1") or 1))
    tasks = [(letters, word_len, a) for a in range(len(letters))]
    if word_len < 1:
        return VariationSample(seed=seed)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_walk, tasks))
    else:
        parts = [_walk(t) for t in tasks]
    out = VariationSample(seed=seed)
    for rows, skipped in parts:
        out.rows.extend(rows)
        out.skipped += skipped
    out.rows.sort(key=lambda r: (len(r[0]), r[0]))
    return out


def random_traceless(rng, d: int, scale: float = 1.0) -> np.ndarray:
    A = rng.standard_normal((d, d)) * scale
    return A - np.trace(A) / d * np.eye(d)


GENERATOR_SCALE = 0.3


def random_generators(d: int, count: int, seed: int, cocycle: str = "random",
                      scale: float = GENERATOR_SCALE) -> list:
    """exp(scale * A) generators with A standard normal traceless.

    cocycle: "random" (independent traceless u), "zero", or "coboundary"
    (u = X - Ad(g) X for one random traceless X).
    """
    rng = np.random.default_rng(seed)
    gens = [expm(random_traceless(rng, d, scale)) for _ in range(count)]
    if cocycle == "zero":
        us = [np.zeros((d, d)) for _ in gens]
    elif cocycle == "coboundary":
        X = random_traceless(rng, d)
        us = [X - g @ X @ np.linalg.inv(g) for g in gens]
    elif cocycle == "random":
        us = [random_traceless(rng, d) for _ in gens]
    else:
        raise ValueError(f"unknown cocycle kind {cocycle!r}")
    return list(zip(gens, us))
