import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from graverforest.intlin import (DimensionError, hermite_normal_form, kernel_basis,
                                 mat_mul, mat_vec, neg, neg_part, phase_one_cost,
                                 pos_part, product_leq, sign_leq, solve_diophantine,
                                 xgcd)
from graverforest.oracle import enumerate_kernel_box

small = st.integers(-4, 4)


def vecs(d):
    return st.lists(small, min_size=d, max_size=d).map(tuple)


def det(M):
    # Bareiss fraction-free elimination, exact on ints
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


def test_product_leq_examples():
    assert product_leq((1, -1), (2, 0))
    assert product_leq((0, 0), (0, 0))
    assert not product_leq((1, 1), (0, 2))


def test_sign_leq_examples():
    assert sign_leq((1, -1), (2, -3))
    assert sign_leq((0, 0), (5, -7))
    assert not sign_leq((1, 1), (2, -3))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        sign_leq((1,), (1, 2))
    with pytest.raises(DimensionError):
        product_leq((1, 2, 3), (1, 2))


@given(vecs(3), vecs(3), vecs(3))
def test_sign_leq_is_a_partial_order(a, b, c):
    assert sign_leq(a, a)
    if sign_leq(a, b) and sign_leq(b, a):
        assert a == b
    if sign_leq(a, b) and sign_leq(b, c):
        assert sign_leq(a, c)


@given(vecs(4), vecs(4))
def test_sign_leq_symmetric_and_extends_product_order(a, b):
    assert sign_leq(a, b) == sign_leq(neg(a), neg(b))
    a0 = tuple(abs(x) for x in a)
    b0 = tuple(abs(x) for x in b)
    assert sign_leq(a0, b0) == product_leq(a0, b0)


@given(vecs(5))
def test_positive_negative_parts(z):
    p, n = pos_part(z), neg_part(z)
    assert tuple(x - y for x, y in zip(p, n)) == z
    assert min(p + n, default=0) >= 0


def test_parts_examples():
    assert (pos_part((2, -1)), neg_part((2, -1))) == ((2, 0), (0, 1))
    assert (pos_part((-3, 4)), neg_part((-3, 4))) == ((0, 4), (3, 0))


def test_phase_one_cost():
    assert phase_one_cost((2, -1)) == (0, -1)
    assert phase_one_cost((0, 0)) == (0, 0)
    assert phase_one_cost((-1, -2)) == (-1, -1)
    assert phase_one_cost((2, -1), literal=True) == (-1, 0)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g >= 0 and s * a + t * b == g
    if a or b:
        assert a % g == 0 and b % g == 0


def test_hnf_examples():
    H, U = hermite_normal_form(((2, 4),))
    assert H == ((2, 0),)
    assert mat_mul(((2, 4),), U) == H
    assert abs(det(U)) == 1
    assert hermite_normal_form(((1, 0), (0, 1)))[0] == ((1, 0), (0, 1))
    assert hermite_normal_form(((0, 0),))[0] == ((0, 0),)


@settings(max_examples=60)
@given(st.integers(1, 3), st.integers(1, 5), st.data())
def test_hnf_unimodular_and_echelon(m, n, data):
    A = tuple(data.draw(vecs(n)) for _ in range(m))
    H, U = hermite_normal_form(A)
    assert mat_mul(A, U) == H
    assert abs(det(U)) == 1
    # pivot rows strictly increase from column to column
    last = -1
    for j in range(n):
        col = [H[i][j] for i in range(m)]
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            assert all(not any(H[i][jj] for i in range(m)) for jj in range(j, n))
            break
        assert nz[0] > last and col[nz[0]] > 0
        last = nz[0]


def test_kernel_basis_examples():
    assert kernel_basis(((1, -1),)) in ([(1, 1)], [(-1, -1)])
    assert kernel_basis(((1, 0), (0, 1))) == []
    K = kernel_basis(((1, 1, -1),))
    assert len(K) == 2
    assert all(mat_vec(((1, 1, -1),), v) == (0,) for v in K)


def _in_lattice(v, K):
    # v in Z-span of K: K is a basis, so solve K^T y = v over Z
    if not K:
        return not any(v)
    KT = tuple(tuple(K[j][i] for j in range(len(K))) for i in range(len(v)))
    return solve_diophantine(KT, v) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(2, 4), st.data())
def test_kernel_basis_spans_box_kernel(m, n, data):
    A = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n).map(tuple))
              for _ in range(m))
    K = kernel_basis(A)
    assert all(not any(mat_vec(A, v)) for v in K)
    rng = random.Random(n * 31 + m)
    for _ in range(5):
        coeffs = [rng.randint(-3, 3) for _ in K]
        v = tuple(sum(c * k[i] for c, k in zip(coeffs, K)) for i in range(n))
        assert not any(mat_vec(A, v))
    for v in enumerate_kernel_box(A, 2):
        assert _in_lattice(v, K)


def test_solve_diophantine_examples():
    assert solve_diophantine(((2,),), (4,)) == (2,)
    assert solve_diophantine(((2,),), (3,)) is None
    z = solve_diophantine(((1, 1),), (1,))
    assert z is not None and sum(z) == 1
    with pytest.raises(DimensionError):
        solve_diophantine(((1, 1),), (1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2), st.integers(1, 3), st.data())
def test_solve_diophantine_against_search(m, n, data):
    A = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n).map(tuple))
              for _ in range(m))
    b = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=m, max_size=m)))
    z = solve_diophantine(A, b)
    if z is not None:
        assert mat_vec(A, z) == b
    else:
        # any solution would have a representative in a box that covers one
        # period of the kernel lattice; a generous box suffices at this size
        for cand in itertools.product(range(-8, 9), repeat=n):
            assert mat_vec(A, cand) != b
