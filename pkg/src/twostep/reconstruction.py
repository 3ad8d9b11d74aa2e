"""Recover ``omega`` from fibrewise trace pairings by winding numbers.

For a loop ``s -> base + s * turns * e_k`` in the dual torus, the pairing
``chi -> tau_chi(b1 cup b2) = chi(omega(b1 ^ b2))`` winds
``turns * omega(b1 ^ b2)_k`` times around the circle. Sampling the loop
densely enough and summing lifted increments reads off the integer.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg
from .cohomology import (
    EquivalenceVerdict,
    is_centrally_nondegenerate,
    transform_triple,
    triples_equivalent,
)
from .group import SkewTriple, canonical_triple
from .nctorus import frac_mod1

Pairing = Callable[[Sequence[int], Sequence[int], Sequence[Fraction]], "Fraction | float"]

MAX_NOISE = Fraction(1, 8)


class WindingUnstable(RuntimeError):
    def __init__(self, message: str, entry: tuple[int, int, int] | None = None):
        super().__init__(message if entry is None else f"{message} at (k, i, j) = {entry}")
        self.entry = entry


class DegenerateTriple(ValueError):
    pass


@dataclass(frozen=True)
class BundleOracle:
    """What the reconstruction is allowed to see of ``C*(G)``."""

    glimm_dim: int
    unit_rank: int
    pairing: Pairing
    base_point: tuple[Fraction, ...] | None = None

    @property
    def exact(self) -> bool:
        return getattr(self.pairing, "exact", True)


@dataclass(frozen=True)
class WindingDiagnostics:
    k: int
    i: int
    j: int
    winding: int
    samples: int
    residual: float


@dataclass(frozen=True)
class RecoveredData:
    m: int
    n: int
    form: SkewTriple
    diagnostics: tuple[WindingDiagnostics, ...]


class _TriplePairing:
    # picklable and safe to call concurrently: holds only immutable data
    def __init__(self, mats, noise: Fraction | None, noise_seed: int):
        self.mats = mats
        self.noise = noise
        self.noise_seed = noise_seed
        self.exact = noise is None

    def __call__(self, b1, b2, chi):
        chi = tuple(frac_mod1(c) for c in chi)
        total = Fraction(0)
        for c, M in zip(chi, self.mats):
            if not c:
                continue
            s12 = sum(x * M[i][j] * y for i, x in enumerate(b1) if x for j, y in enumerate(b2) if y)
            s21 = sum(x * M[i][j] * y for i, x in enumerate(b2) if x for j, y in enumerate(b1) if y)
            total += c * (s12 - s21)
        value = frac_mod1(total)
        if self.noise is None:
            return value
        # deterministic per point of the torus, worst-case magnitude
        rng = random.Random(f"{self.noise_seed}|{tuple(b1)}|{tuple(b2)}|{chi}")
        delta = float(self.noise) * rng.choice((-1.0, 1.0))
        return (float(value) + delta) % 1.0


def oracle_from_triple(
    t: SkewTriple,
    scramble_seed: int | None = None,
    noise: Fraction | float | None = None,
    noise_seed: int = 0,
    scramble_steps: int | None = None,
    base_point: Sequence[Fraction] | None = None,
) -> BundleOracle:
    """Honest oracle for ``C*(G)``, optionally hiding the basis and adding noise.

    With ``scramble_seed`` the triple is moved by random unimodular
    ``(phi_A, phi_B)`` and the pairing is computed from a cocycle shifted by a
    random symmetric (coboundary) part, so nothing of the original basis
    survives except the equivalence class.
    """
    if noise is not None:
        noise = Fraction(noise)
        if not 0 <= noise < MAX_NOISE:
            raise ValueError(f"noise must lie in [0, {MAX_NOISE}), got {noise}")
    hidden = t
    mats = [[[f[i][j] if i < j else 0 for j in range(t.n)] for i in range(t.n)] for f in t.forms]
    if scramble_seed is not None:
        steps = scramble_steps if scramble_steps is not None else t.m + t.n
        phi_a = linalg.random_unimodular(t.m, scramble_seed, steps) if t.m else ()
        phi_b = linalg.random_unimodular(t.n, scramble_seed + 1, steps) if t.n else ()
        hidden = transform_triple(t, phi_a, phi_b)
        rng = random.Random(scramble_seed)
        mats = []
        for f in hidden.forms:
            M = [[f[i][j] if i < j else 0 for j in range(t.n)] for i in range(t.n)]
            for i in range(t.n):
                for j in range(i, t.n):
                    s = rng.randint(-5, 5)
                    M[i][j] += s
                    if i != j:
                        M[j][i] += s
            mats.append(M)
    pairing = _TriplePairing(tuple(linalg.as_matrix(M) for M in mats), noise, noise_seed)
    base = tuple(Fraction(c) for c in base_point) if base_point is not None else None
    return BundleOracle(t.m, t.n, pairing, base)


def _lift(d):
    """Representative of ``d mod 1`` in ``(-1/2, 1/2]``."""
    d = d - math.floor(d)
    return d - 1 if d > Fraction(1, 2) else d


def winding_number(samples: Sequence, tol: float = 1e-6) -> int:
    """Total turning of a closed sampled loop in ``R/Z``."""
    total = sum((_lift(b - a) for a, b in zip(samples, samples[1:])), Fraction(0))
    w = round(total)
    residual = abs(total - w)
    if residual > tol:
        raise WindingUnstable(f"winding sum {float(total)} is not within {tol} of an integer")
    return int(w)


# Off-grid probe points. A uniform grid of N samples cannot see a winding
# that is a multiple of N, so candidates are also checked against the
# character law f(base + tau e_k) - f(base) = W tau (mod 1).
EXACT_PROBES = (Fraction(1, 1009), Fraction(1, 10007))
FLOAT_PROBES = (Fraction(1, 2), Fraction(1, 3))
FLOAT_PROBE_TOL = 0.25  # two readings, each off by less than MAX_NOISE


def _evaluate(oracle: BundleOracle, k: int, b1, b2, offset: Fraction):
    chi = list(oracle.base_point or (Fraction(0),) * oracle.glimm_dim)
    chi[k] += offset
    return oracle.pairing(b1, b2, chi)


def _loop_samples(oracle: BundleOracle, k: int, b1, b2, turns: int, N: int) -> list:
    return [_evaluate(oracle, k, b1, b2, Fraction(turns * s, N)) for s in range(N + 1)]


def _passes_probes(oracle: BundleOracle, k: int, b1, b2, turns: int, w: int) -> bool:
    f0 = _evaluate(oracle, k, b1, b2, Fraction(0))
    for tau in EXACT_PROBES if oracle.exact else FLOAT_PROBES:
        miss = abs(_lift(_evaluate(oracle, k, b1, b2, turns * tau) - f0 - w * tau))
        if miss > (0 if oracle.exact else FLOAT_PROBE_TOL):
            return False
    return True


def loop_winding(
    oracle: BundleOracle,
    k: int,
    b1: Sequence[int],
    b2: Sequence[int],
    turns: int = 1,
    tol: float = 1e-6,
    max_samples: int = 2**20,
    min_samples: int = 16,
) -> tuple[int, int, float]:
    """Winding of ``chi -> pairing(b1, b2, chi)`` along the k-th generator loop.

    ``turns`` traverses the loop several times (negative: backwards). Sampling
    doubles until two consecutive rounds agree with every lifted increment
    strictly inside ``(-1/2, 1/2)`` and the value survives the off-grid probes.
    Returns ``(winding, samples, residual)``.
    """
    N = min_samples
    previous = None
    while N <= max_samples:
        samples = _loop_samples(oracle, k, b1, b2, turns, N)
        steps = [_lift(b - a) for a, b in zip(samples, samples[1:])]
        if all(abs(d) < 0.5 for d in steps):
            total = sum(steps, Fraction(0)) if oracle.exact else math.fsum(steps)
            w = round(total)
            residual = float(abs(total - w))
            if residual < tol:
                if previous == w and _passes_probes(oracle, k, b1, b2, turns, int(w)):
                    return int(w), N, residual
                previous = w
            else:
                previous = None
        else:
            previous = None
        N *= 2
    raise WindingUnstable(f"no stable winding with at most {max_samples} samples")


def recover_form(oracle: BundleOracle, tol: float = 1e-6, max_samples: int = 2**20) -> RecoveredData:
    m, n = oracle.glimm_dim, oracle.unit_rank
    forms = [[[0] * n for _ in range(n)] for _ in range(m)]
    diags = []
    basis = linalg.identity(n)
    for k in range(m):
        for i in range(n):
            for j in range(i + 1, n):
                try:
                    w, N, res = loop_winding(oracle, k, basis[i], basis[j], 1, tol, max_samples)
                except WindingUnstable as exc:
                    raise WindingUnstable(str(exc), (k, i, j)) from exc
                forms[k][i][j], forms[k][j][i] = w, -w
                diags.append(WindingDiagnostics(k, i, j, w, N, res))
    return RecoveredData(m, n, SkewTriple(m, n, forms), tuple(diags))


def roundtrip_check(
    t: SkewTriple,
    scramble_seed: int | None = 0,
    budget: int = 8,
    noise: Fraction | None = None,
) -> EquivalenceVerdict:
    """Hide ``t`` behind an oracle, recover a triple, and compare with ``(Z(G), G/Z(G), omega_G)``."""
    if not is_centrally_nondegenerate(t):
        raise DegenerateTriple("triple has a non-trivial radical; pass it through canonical_triple first")
    oracle = oracle_from_triple(t, scramble_seed=scramble_seed, noise=noise)
    recovered = recover_form(oracle).form
    return triples_equivalent(recovered, canonical_triple(t), budget)
