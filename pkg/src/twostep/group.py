"""Torsion-free 2-step nilpotent groups ``A x_sigma B`` in Mal'cev coordinates.

A group is presented by a :class:`SkewTriple` ``(m, n, forms)``: ``A = Z^m`` is
central, ``B = Z^n``, and ``forms[k][i][j]`` is the k-th coordinate of
``omega(e_i ^ e_j)``. Elements are pairs ``(a, b)`` multiplied with the
strictly-upper-triangular bilinear cocycle of ``omega``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .linalg import IntMatrix


class DimensionMismatch(ValueError):
    pass


class NotSkew(ValueError):
    pass


@dataclass(frozen=True)
class SkewTriple:
    m: int
    n: int
    forms: tuple[IntMatrix, ...]

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise DimensionMismatch("ranks must be non-negative")
        forms = tuple(linalg.as_matrix(f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        if len(forms) != self.m:
            raise DimensionMismatch(f"expected {self.m} forms, got {len(forms)}")
        for k, f in enumerate(forms):
            if len(f) != self.n or any(len(row) != self.n for row in f):
                raise DimensionMismatch(f"forms[{k}] is not {self.n}x{self.n}")
            for i in range(self.n):
                for j in range(i, self.n):
                    if f[i][j] != -f[j][i]:
                        raise NotSkew(f"forms[{k}][{i}][{j}] = {f[i][j]} but forms[{k}][{j}][{i}] = {f[j][i]}")

    @classmethod
    def zero(cls, m: int, n: int) -> SkewTriple:
        return cls(m, n, tuple(linalg.zeros(n, n) for _ in range(m)))

    def is_zero(self) -> bool:
        return not any(x for f in self.forms for row in f for x in row)

    def coefficient_matrix(self) -> IntMatrix:
        """``m x C(n,2)`` matrix whose row k lists ``forms[k][i][j]`` for ``i < j``."""
        pairs = [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]
        return tuple(tuple(f[i][j] for i, j in pairs) for f in self.forms)


HEISENBERG = SkewTriple(1, 2, (((0, 1), (-1, 0)),))


@dataclass(frozen=True)
class GroupElement:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    def __str__(self):
        return ",".join(map(str, self.a)) + ";" + ",".join(map(str, self.b))

    @classmethod
    def parse(cls, text: str) -> GroupElement:
        if text.count(";") != 1:
            raise ValueError(f"element {text!r} must look like 'a1,..,am;b1,..,bn'")
        left, right = text.split(";")
        to_ints = lambda s: tuple(int(x) for x in s.split(",")) if s.strip() else ()
        return cls(to_ints(left), to_ints(right))


@dataclass(frozen=True)
class Sublattice:
    ambient: int
    basis: IntMatrix  # ambient x rank, column HNF

    @property
    def rank(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[c] for row in self.basis) for c in range(self.rank)]

    def contains(self, v: Sequence[int]) -> bool:
        # echelon back-substitution on the column HNF
        v = list(v)
        for col in self.columns():
            p = next(i for i, x in enumerate(col) if x)
            if v[p] % col[p]:
                return False
            q = v[p] // col[p]
            v = [x - q * y for x, y in zip(v, col)]
        return not any(v)


def identity_element(t: SkewTriple) -> GroupElement:
    return GroupElement((0,) * t.m, (0,) * t.n)


def _check(t: SkewTriple, *xs: GroupElement):
    for x in xs:
        if len(x.a) != t.m or len(x.b) != t.n:
            raise DimensionMismatch(f"element {x} does not match ranks (m={t.m}, n={t.n})")


def _check_vec(t: SkewTriple, *bs: Sequence[int]):
    for b in bs:
        if len(b) != t.n:
            raise DimensionMismatch(f"vector {tuple(b)} does not have length {t.n}")


def omega(t: SkewTriple, b1: Sequence[int], b2: Sequence[int]) -> tuple[int, ...]:
    """``omega(b1 ^ b2)`` as a vector in ``Z^m``."""
    _check_vec(t, b1, b2)
    return tuple(
        sum(b1[i] * f[i][j] * b2[j] for i in range(t.n) for j in range(t.n) if f[i][j])
        for f in t.forms
    )


def standard_cocycle(t: SkewTriple, b1: Sequence[int], b2: Sequence[int]) -> tuple[int, ...]:
    _check_vec(t, b1, b2)
    return tuple(
        sum(f[i][j] * b1[i] * b2[j] for i in range(t.n) for j in range(i + 1, t.n))
        for f in t.forms
    )


def multiply(t: SkewTriple, x: GroupElement, y: GroupElement) -> GroupElement:
    _check(t, x, y)
    s = standard_cocycle(t, x.b, y.b)
    return GroupElement(
        tuple(p + q + r for p, q, r in zip(x.a, y.a, s)),
        tuple(p + q for p, q in zip(x.b, y.b)),
    )


def inverse(t: SkewTriple, x: GroupElement) -> GroupElement:
    _check(t, x)
    s = standard_cocycle(t, x.b, x.b)
    return GroupElement(tuple(c - a for a, c in zip(x.a, s)), tuple(-v for v in x.b))


def power(t: SkewTriple, x: GroupElement, k: int) -> GroupElement:
    if k < 0:
        return power(t, inverse(t, x), -k)
    result, base = identity_element(t), x
    while k:
        if k & 1:
            result = multiply(t, result, base)
        base = multiply(t, base, base)
        k >>= 1
    return result


def commutator(t: SkewTriple, x: GroupElement, y: GroupElement) -> GroupElement:
    """``x y x^-1 y^-1``, which is ``(omega(b_x ^ b_y); 0)``."""
    _check(t, x, y)
    return GroupElement(omega(t, x.b, y.b), (0,) * t.n)


def conjugate(t: SkewTriple, g: GroupElement, x: GroupElement) -> GroupElement:
    """``g x g^-1``."""
    _check(t, g, x)
    w = omega(t, g.b, x.b)
    return GroupElement(tuple(a + c for a, c in zip(x.a, w)), x.b)


def _stacked_forms(t: SkewTriple) -> IntMatrix:
    return tuple(row for f in t.forms for row in f)


def radical_basis(t: SkewTriple) -> Sublattice:
    """Basis of ``{b : omega(b ^ x) = 0 for all x}``."""
    return Sublattice(t.n, linalg.integer_kernel(_stacked_forms(t), t.n))


def center_basis(t: SkewTriple) -> Sublattice:
    """The centre ``A + rad(omega)`` inside ``Z^(m+n)``."""
    rad = radical_basis(t)
    cols = [tuple(int(i == k) for i in range(t.m + t.n)) for k in range(t.m)]
    cols += [(0,) * t.m + c for c in rad.columns()]
    return Sublattice(t.m + t.n, linalg.transpose(cols, t.m + t.n))


def is_central(t: SkewTriple, x: GroupElement) -> bool:
    _check(t, x)
    return center_basis(t).contains(x.a + x.b)


def nilpotency_class(t: SkewTriple) -> int:
    if t.m == 0 and t.n == 0:
        return 0
    return 1 if t.is_zero() else 2


def upper_central_series(t: SkewTriple) -> tuple[int, ...]:
    """Ranks of the successive subquotients ``Z_1, Z_2/Z_1, ...``."""
    cls = nilpotency_class(t)
    if cls == 0:
        return ()
    if cls == 1:
        return (t.m + t.n,)
    r = radical_basis(t).rank
    return (t.m + r, t.n - r)


def is_fc_element(t: SkewTriple, x: GroupElement) -> bool:
    """Whether the conjugacy class of ``x`` is finite.

    Conjugates of ``x`` are ``(a_x + omega(b_g ^ b_x); b_x)``; as ``b_g`` ranges
    over ``Z^n`` this set is a coset of a lattice, finite only when that lattice
    is zero, i.e. when ``b_x`` lies in the radical.
    """
    _check(t, x)
    return not any(any(omega(t, x.b, e)) for e in linalg.identity(t.n))


def canonical_triple(t: SkewTriple) -> SkewTriple:
    """Pass to ``(Z(G), G/Z(G), omega_G)``.

    The radical moves into the centre and ``omega`` is restricted to a section
    of ``B -> B/rad``. The quotient map is normalised to row HNF, which fixes
    the result independently of the chosen section.
    """
    rad = radical_basis(t)
    r = rad.rank
    if r == 0:
        return t
    k = t.n - r
    # rows annihilating the radical, normalised
    pi = linalg.integer_kernel(linalg.transpose(rad.basis), t.n)
    pi, _ = linalg.hnf(linalg.transpose(pi, t.n) if pi and pi[0] else (), t.n)
    pi = tuple(row for row in pi if any(row))
    if k == 0:
        return SkewTriple.zero(t.m + r, 0)
    S, U, V = linalg.snf(pi)
    # pi V = U^-1 S with S = [I | 0]; a section is V[:, :k] U
    section = linalg.matmul(tuple(row[:k] for row in V), U)
    new_forms = [
        linalg.matmul(linalg.matmul(linalg.transpose(section), f), section) for f in t.forms
    ]
    new_forms += [linalg.zeros(k, k)] * r
    return SkewTriple(t.m + r, k, tuple(new_forms))
