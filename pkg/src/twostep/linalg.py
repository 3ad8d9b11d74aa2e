"""Exact integer matrix kernels.

Matrices are tuples of row tuples holding Python ints, so entries never
overflow. A matrix with zero rows cannot carry its column count; functions
that need it take an explicit ``ncols``.
"""

from __future__ import annotations

import random
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> IntMatrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if not A:
        return ()
    if not B:
        return tuple(() for _ in A)
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_unimodular(M: Sequence[Sequence[int]]) -> bool:
    return all(len(row) == len(M) for row in M) and abs(det(M)) == 1


def snf(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Returns ``(S, U, V)`` with ``S == U @ M @ V``, ``U`` and ``V`` unimodular,
    and ``S`` diagonal with non-negative entries, each dividing the next.
    """
    rows = len(M)
    cols = len(M[0]) if rows else (ncols or 0)
    A = [list(r) for r in M]
    U = [list(r) for r in identity(rows)]
    V = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for r in R:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for R in (A, U):
            rd, rs = R[dst], R[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):
        for R in (A, V):
            for r in R:
                r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        cands = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not cands:
            break
        _, pi, pj = min(cands)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, rows) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, cols) if A[t][j]]
            if rest:
                # remainders are strictly smaller than the pivot
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(A), as_matrix(U), as_matrix(V)


def smith_divisors(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, ...]:
    """Non-zero invariant factors of ``M``."""
    S = snf(M, ncols)[0]
    return tuple(S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i])


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(
    M: Sequence[Sequence[int]], ncols: int | None = None, transform: bool = True
) -> tuple[IntMatrix, IntMatrix | None]:
    """Row Hermite normal form with transform.

    Returns ``(H, U)`` with ``H == U @ M`` and ``U`` unimodular. Non-zero rows
    of ``H`` come first in echelon form with positive pivots; entries above a
    pivot lie in ``[0, pivot)``. ``H`` depends only on the row lattice of ``M``.
    With ``transform=False`` the second item is None.
    """
    rows = len(M)
    cols = len(M[0]) if rows else (ncols or 0)
    A = [list(r) for r in M]
    U = [list(r) for r in identity(rows)] if transform else None
    both = (A, U) if transform else (A,)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            for R in both:
                top, bot = R[r], R[i]
                R[r] = [x * s + y * t for s, t in zip(top, bot)]
                R[i] = [-bg * s + ag * t for s, t in zip(top, bot)]
        p = A[r][c]
        if p == 0:
            continue
        if p < 0:
            for R in both:
                R[r] = [-v for v in R[r]]
            p = -p
        for i in range(r):
            q = A[i][c] // p
            if q:
                for R in both:
                    R[i] = [s - q * t for s, t in zip(R[i], R[r])]
        r += 1
    return tuple(map(tuple, A)), (tuple(map(tuple, U)) if transform else None)


def column_hnf(K: Sequence[Sequence[int]], ambient: int) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns of K."""
    H, _ = hnf(transpose(K, 0) if K and K[0] else (), ambient)
    nonzero = [row for row in H if any(row)]
    return transpose(nonzero, ambient)


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Basis of ``{x : M x = 0}`` as the columns of a column-HNF matrix."""
    cols = len(M[0]) if M else (ncols or 0)
    S, _, V = snf(M, cols)
    rank = sum(1 for i in range(min(len(S), cols)) if S[i][i])
    K = [row[rank:] for row in V]
    return column_hnf(K, cols)


def inverse_unimodular(M: Sequence[Sequence[int]]) -> IntMatrix:
    S, U, V = snf(M)
    if S != identity(len(M)):
        raise ValueError("matrix is not unimodular")
    return matmul(V, U)


def skew_canonical_form(M: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], IntMatrix]:
    """Congruence normal form of an integer skew-symmetric matrix.

    Returns ``(d, U)`` such that ``U.T @ M @ U`` is block diagonal with blocks
    ``[[0, d_i], [-d_i, 0]]`` followed by zeros, ``d_i > 0`` and ``d_i | d_{i+1}``.
    """
    n = len(M)
    A = [list(r) for r in M]
    for i in range(n):
        for j in range(n):
            if A[i][j] != -A[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    U = [list(r) for r in identity(n)]

    def swap(i, j):
        # basis swap e_i <-> e_j
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def add(dst, src, q):
        # basis change e_dst += q * e_src
        for r in A:
            r[dst] += q * r[src]
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        for r in U:
            r[dst] += q * r[src]

    divisors = []
    t = 0
    while t + 1 < n:
        cands = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(i + 1, n) if A[i][j]]
        if not cands:
            break
        _, i, j = min(cands)
        swap(t, i)
        swap(t + 1, j if j != t else i)
        while True:
            if A[t][t + 1] < 0:
                swap(t, t + 1)
            p = A[t][t + 1]
            for k in range(t + 2, n):
                if A[t][k]:
                    add(k, t + 1, -(A[t][k] // p))
                if A[t + 1][k]:
                    add(k, t, A[t + 1][k] // p)
            rest = [(abs(A[s][k]), s, k) for s in (t, t + 1) for k in range(t + 2, n) if A[s][k]]
            if rest:
                _, s, k = min(rest)
                if s == t:
                    swap(t + 1, k)
                else:
                    swap(t, k)
                continue
            bad = next(
                (i for i in range(t + 2, n) for j in range(t + 2, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add(t, bad, 1)
        divisors.append(A[t][t + 1])
        t += 2
    return tuple(divisors), as_matrix(U)


def skew_block_form(divisors: Sequence[int], n: int) -> IntMatrix:
    D = [[0] * n for _ in range(n)]
    for k, d in enumerate(divisors):
        D[2 * k][2 * k + 1] = d
        D[2 * k + 1][2 * k] = -d
    return as_matrix(D)


def random_unimodular(n: int, seed: int, steps: int) -> IntMatrix:
    """Deterministic product of ``steps`` random elementary row operations."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    A = [list(r) for r in identity(n)]
    for _ in range(steps):
        op = rng.randrange(3) if n > 1 else 2
        if op == 0:
            i, j = rng.sample(range(n), 2)
            q = rng.choice([-3, -2, -1, 1, 2, 3])
            A[i] = [x + q * y for x, y in zip(A[i], A[j])]
        elif op == 1:
            i, j = rng.sample(range(n), 2)
            A[i], A[j] = A[j], A[i]
        else:
            i = rng.randrange(n)
            A[i] = [-x for x in A[i]]
    return as_matrix(A)
