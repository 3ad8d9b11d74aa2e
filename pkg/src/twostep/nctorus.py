"""Fibres of the group C*-algebra over the dual torus of the centre.

The fibre at a character ``chi`` of ``A = Z^m`` is the twisted group algebra
of ``B = Z^n`` for the real form ``chi . omega`` (mod 1). Its K-theory is
modelled by the exterior algebra on ``Z^n``, and the trace on a cup product
of two degree-one classes is the fibre form evaluated on their wedge.
Rational fibres with ``n = 2`` are realised by clock and shift matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .group import DimensionMismatch, SkewTriple

Rational = Fraction


def frac_mod1(x) -> Fraction:
    x = Fraction(x)
    return x - math.floor(x)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


@dataclass(frozen=True)
class Character:
    """Point of the dual torus ``T^m``, coordinates in ``[0, 1)``."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(frac_mod1(c) for c in self.coords))

    @classmethod
    def parse(cls, text: str) -> Character:
        if not text.strip():
            return cls(())
        return cls(tuple(parse_rational(p) for p in text.split(",")))

    @classmethod
    def trivial(cls, m: int) -> Character:
        return cls((Fraction(0),) * m)

    def __add__(self, other: Character) -> Character:
        return Character(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __str__(self):
        return ",".join(str(c) for c in self.coords)


@dataclass(frozen=True)
class FiberForm:
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for i in range(self.n):
            for j in range(self.n):
                if frac_mod1(self.entries[i][j] + self.entries[j][i]) != 0:
                    raise ValueError("fibre form is not skew mod 1")

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)


def _check_character(t: SkewTriple, chi: Character):
    if len(chi.coords) != t.m:
        raise DimensionMismatch(f"character has {len(chi.coords)} coordinates, expected {t.m}")


def fiber_form(t: SkewTriple, chi: Character) -> FiberForm:
    _check_character(t, chi)
    return FiberForm(
        t.n,
        tuple(
            tuple(frac_mod1(sum(c * f[i][j] for c, f in zip(chi.coords, t.forms))) for j in range(t.n))
            for i in range(t.n)
        ),
    )


def is_fiber_untwisted(t: SkewTriple, chi: Character) -> bool:
    """Whether the fibre cocycle is a coboundary, i.e. the fibre admits a character."""
    return fiber_form(t, chi).is_zero()


@dataclass(frozen=True)
class ExteriorElement:
    """Integer element of the exterior algebra on ``Z^n``.

    ``terms`` maps strictly increasing index tuples (0-based) to coefficients.
    """

    n: int
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if list(idx) != sorted(set(idx)) or any(not 0 <= i < self.n for i in idx):
                raise ValueError(f"index {idx} is not a strictly increasing subset of range({self.n})")
            if c:
                clean[idx] = int(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_vector(cls, b: Sequence[int]) -> ExteriorElement:
        return cls(len(b), {(i,): c for i, c in enumerate(b)})

    @classmethod
    def one(cls, n: int) -> ExteriorElement:
        return cls(n, {(): 1})

    def __eq__(self, other):
        return isinstance(other, ExteriorElement) and (self.n, self.terms) == (other.n, other.terms)

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __add__(self, other: ExteriorElement) -> ExteriorElement:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ExteriorElement(self.n, out)

    def scale(self, c: int) -> ExteriorElement:
        return ExteriorElement(self.n, {k: c * v for k, v in self.terms.items()})

    def degree_part(self, d: int) -> ExteriorElement:
        return ExteriorElement(self.n, {k: v for k, v in self.terms.items() if len(k) == d})

    def __xor__(self, other: ExteriorElement) -> ExteriorElement:
        return wedge(self, other)


def _merge_sign(I: tuple[int, ...], J: tuple[int, ...]) -> int:
    # parity of the shuffle sorting I + J
    inversions = sum(1 for i in I for j in J if i > j)
    return -1 if inversions % 2 else 1


def wedge(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    if x.n != y.n:
        raise DimensionMismatch("exterior elements over different ranks")
    out: dict[tuple[int, ...], int] = {}
    for I, a in x.terms.items():
        for J, b in y.terms.items():
            if set(I) & set(J):
                continue
            K = tuple(sorted(I + J))
            out[K] = out.get(K, 0) + _merge_sign(I, J) * a * b
    return ExteriorElement(x.n, out)


def k_ranks(n: int) -> tuple[int, int]:
    """Ranks of ``(K_0, K_1)``: the even and odd parts of the exterior algebra on ``Z^n``."""
    if n < 0:
        raise ValueError("rank must be non-negative")
    if n == 0:
        return (1, 0)
    return (2 ** (n - 1), 2 ** (n - 1))


def elliott_trace(theta: FiberForm, x: ExteriorElement) -> Fraction:
    """Trace of a K_0 class of degree at most two, as a value in ``[0, 1)``.

    Degree 0 contributes its integer coefficient (zero mod 1), degree 2
    contributes ``sum x_ij theta_ij``. Higher degrees need the full exponential
    formula, which is not implemented.
    """
    if x.n != theta.n:
        raise DimensionMismatch("rank mismatch between class and fibre form")
    total = Fraction(0)
    for idx, c in x.terms.items():
        if len(idx) == 0:
            total += c
        elif len(idx) == 2:
            total += c * theta.entries[idx[0]][idx[1]]
        elif len(idx) % 2 == 0:
            raise NotImplementedError("trace on exterior degree > 2")
        else:
            raise ValueError("odd-degree classes live in K_1")
    return frac_mod1(total)


def trace_pairing(t: SkewTriple, chi: Character, b1: Sequence[int], b2: Sequence[int]) -> Fraction:
    """Fibre trace of the cup product of the K_1 classes of ``b1`` and ``b2``."""
    if len(b1) != t.n or len(b2) != t.n:
        raise DimensionMismatch(f"vectors must have length {t.n}")
    cup = wedge(ExteriorElement.from_vector(b1), ExteriorElement.from_vector(b2))
    return elliott_trace(fiber_form(t, chi), cup)


# -- finite-dimensional realisation of rational fibres ----------------------

@dataclass(frozen=True, eq=False)
class UnitaryRep:
    """``lambda(b) = clock^b1 @ shift^b2`` with ``clock shift = e^{2 pi i theta} shift clock``."""

    theta: Fraction
    clock: np.ndarray
    shift: np.ndarray

    @property
    def q(self) -> int:
        return self.theta.denominator

    def generator_power(self, g: np.ndarray, k: int) -> np.ndarray:
        if k < 0:
            return np.linalg.matrix_power(g.conj().T, -k)
        return np.linalg.matrix_power(g, k)

    def unitary(self, b: Sequence[int]) -> np.ndarray:
        return self.generator_power(self.clock, b[0]) @ self.generator_power(self.shift, b[1])

    def commutator_residual(self) -> float:
        u, v = self.clock, self.shift
        phase = np.exp(2j * np.pi * float(self.theta))
        return float(np.linalg.norm(u @ v - phase * (v @ u), 2))

    def unitarity_residual(self, b: Sequence[int]) -> float:
        w = self.unitary(b)
        return float(np.linalg.norm(w @ w.conj().T - np.eye(self.q), 2))


def clock_shift_rep(theta) -> UnitaryRep:
    theta = frac_mod1(Fraction(theta))
    q, p = theta.denominator, theta.numerator
    k = np.arange(q)
    clock = np.diag(np.exp(2j * np.pi * p * k / q))
    shift = np.roll(np.eye(q, dtype=complex), 1, axis=0)  # e_k -> e_{k+1}
    clock.setflags(write=False)
    shift.setflags(write=False)
    return UnitaryRep(theta, clock, shift)


def canonical_trace_check(rep: UnitaryRep, b: Sequence[int]) -> float:
    """``|tr(lambda(b))/q - [b = 0 mod q]|``.

    The canonical trace sends ``u_g`` to 1 at the identity and to 0 elsewhere;
    in the ``q``-dimensional model the identity class is ``b = 0 mod q``.
    """
    q = rep.q
    expected = 1.0 if b[0] % q == 0 and b[1] % q == 0 else 0.0
    return float(abs(np.trace(rep.unitary(b)) / q - expected))
