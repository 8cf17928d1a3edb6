"""Exact integer vectors and integer linear algebra.

Vectors are plain tuples of Python ints and matrices are tuples of row
tuples, so all arithmetic is arbitrary precision and values are hashable.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

IntVec = Tuple[int, ...]
IntMatrix = Tuple[IntVec, ...]


class DimensionError(ValueError):
    pass


def vec(entries: Iterable[int]) -> IntVec:
    out = tuple(int(x) for x in entries)
    return out


def matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix rows")
    return m


def ncols(A: IntMatrix) -> int:
    return len(A[0]) if A else 0


def _check_same(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} != {len(b)}")


def add(a: IntVec, b: IntVec) -> IntVec:
    _check_same(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: IntVec, b: IntVec) -> IntVec:
    _check_same(a, b)
    return tuple(x - y for x, y in zip(a, b))


def neg(a: IntVec) -> IntVec:
    return tuple(-x for x in a)


def scale(t: int, a: IntVec) -> IntVec:
    return tuple(t * x for x in a)


def dot(a: Sequence, b: Sequence):
    _check_same(a, b)
    return sum(x * y for x, y in zip(a, b))


def norm1(a: IntVec) -> int:
    return sum(abs(x) for x in a)


def norm_inf(a: IntVec) -> int:
    return max((abs(x) for x in a), default=0)


def is_zero(a: IntVec) -> bool:
    return not any(a)


def mat_vec(A: IntMatrix, z: Sequence[int]) -> IntVec:
    if A:
        _check_same(A[0], z)
    return tuple(sum(a * x for a, x in zip(row, z)) for row in A)


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                 for row in A)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def product_leq(a: IntVec, b: IntVec) -> bool:
    """Componentwise a <= b."""
    _check_same(a, b)
    return all(x <= y for x, y in zip(a, b))


def sign_leq(a: IntVec, b: IntVec) -> bool:
    """The sign-compatible order: same orthant and no larger magnitudes."""
    _check_same(a, b)
    for x, y in zip(a, b):
        if x * y < 0 or abs(x) > abs(y):
            return False
    return True


def pos_part(z: IntVec) -> IntVec:
    return tuple(x if x > 0 else 0 for x in z)


def neg_part(z: IntVec) -> IntVec:
    return tuple(-x if x < 0 else 0 for x in z)


def phase_one_cost(z: IntVec, literal: bool = False) -> IntVec:
    """Auxiliary cost for feasibility search: -1 on negative entries.

    With ``literal=True`` the marker goes on positive entries instead. That
    variant stalls on simple instances and is kept only so the failure can be
    demonstrated in tests.
    """
    if literal:
        return tuple(-1 if x > 0 else 0 for x in z)
    return tuple(-1 if x < 0 else 0 for x in z)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H == A @ U``. Pivot columns
    of ``H`` come first, pivot entries are positive, entries to the left of a
    pivot lie in ``[0, pivot)`` and the trailing ``cols - rank`` columns are
    zero.
    """
    m = len(A)
    n = ncols(A)
    # work on columns: H[j] is column j of A @ U
    H = [[A[i][j] for i in range(m)] for j in range(n)]
    U = [[int(i == j) for i in range(n)] for j in range(n)]

    def combine(p, j, s, t, u, v):
        # col_p, col_j := s*col_p + t*col_j, u*col_p + v*col_j
        for M in (H, U):
            cp, cj = M[p], M[j]
            M[p] = [s * x + t * y for x, y in zip(cp, cj)]
            M[j] = [u * x + v * y for x, y in zip(cp, cj)]

    p = 0
    for i in range(m):
        if p == n:
            break
        for j in range(p + 1, n):
            y = H[j][i]
            if y == 0:
                continue
            x = H[p][i]
            g, s, t = xgcd(x, y)
            combine(p, j, s, t, -y // g, x // g)
        piv = H[p][i]
        if piv == 0:
            continue
        if piv < 0:
            H[p] = [-x for x in H[p]]
            U[p] = [-x for x in U[p]]
            piv = -piv
        for j in range(p):
            q = H[j][i] // piv
            if q:
                H[j] = [x - q * y for x, y in zip(H[j], H[p])]
                U[j] = [x - q * y for x, y in zip(U[j], U[p])]
        p += 1

    Hm = tuple(tuple(H[j][i] for j in range(n)) for i in range(m))
    Um = tuple(tuple(U[j][i] for j in range(n)) for i in range(n))
    return Hm, Um


def _rank_from_hnf(H: IntMatrix, n: int) -> int:
    r = 0
    for j in range(n):
        if any(row[j] for row in H):
            r = j + 1
    return r


def kernel_basis(A: IntMatrix, cols: Optional[int] = None) -> list:
    """Lattice basis of the integer kernel, read off the zero columns of the HNF."""
    n = ncols(A) if A else (cols or 0)
    if not A:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    H, U = hermite_normal_form(A)
    r = _rank_from_hnf(H, n)
    return [tuple(U[i][j] for i in range(n)) for j in range(r, n)]


def solve_diophantine(A: IntMatrix, b: Sequence[int]) -> Optional[IntVec]:
    """Some integer z with A z = b, or None when none exists."""
    if len(b) != len(A):
        raise DimensionError(f"rhs has length {len(b)}, matrix has {len(A)} rows")
    n = ncols(A)
    H, U = hermite_normal_form(A)
    y = [0] * n
    j = 0
    for i in range(len(A)):
        acc = sum(H[i][t] * y[t] for t in range(j))
        if j < n and H[i][j] != 0:
            q, r = divmod(b[i] - acc, H[i][j])
            if r:
                return None
            y[j] = q
            j += 1
        elif acc != b[i]:
            return None
    return mat_vec(U, y)
