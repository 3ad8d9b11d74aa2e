"""Seeded random triples and elements for property checks."""

from __future__ import annotations

import random

from .cohomology import is_centrally_nondegenerate
from .group import GroupElement, SkewTriple


def random_skew(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> list[list[int]]:
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(lo, hi)
            M[i][j], M[j][i] = v, -v
    return M


def random_triple(rng: random.Random, m: int, n: int, lo: int = -9, hi: int = 9) -> SkewTriple:
    return SkewTriple(m, n, tuple(random_skew(rng, n, lo, hi) for _ in range(m)))


def random_nondegenerate_triple(rng: random.Random, m: int, n: int, lo: int = -9, hi: int = 9) -> SkewTriple:
    if m == 0 and n > 0 or (m == 1 and n % 2):
        raise ValueError(f"no centrally non-degenerate triple with m={m}, n={n}")
    while True:
        t = random_triple(rng, m, n, lo, hi)
        if is_centrally_nondegenerate(t):
            return t


def random_element(rng: random.Random, t: SkewTriple, bound: int = 20) -> GroupElement:
    return GroupElement(
        tuple(rng.randint(-bound, bound) for _ in range(t.m)),
        tuple(rng.randint(-bound, bound) for _ in range(t.n)),
    )
