import random

import pytest
from hypothesis import given, settings, strategies as st

from graverforest.graver import (brute_force_graver, graver_basis, minimize_to_graver,
                                 normal_form_vec, pottier_completion, project_and_lift,
                                 symmetrize)
from graverforest.intlin import kernel_basis, mat_vec, sign_leq

SIX = {(1, 0, 1), (-1, 0, -1), (0, 1, 1), (0, -1, -1), (1, -1, 0), (-1, 1, 0)}


def matrices(max_rows=2, max_cols=4, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(2, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(tuple),
                               min_size=m, max_size=m).map(tuple)))


def test_normal_form_examples():
    assert normal_form_vec((2, -2), [(1, -1)]) == (0, 0)
    assert normal_form_vec((3, 1), [(1, 1)]) == (2, 0)
    assert normal_form_vec((1, 0), [(0, 1)]) == (1, 0)


def test_normal_form_rejects_zero_reducer():
    with pytest.raises(ValueError):
        normal_form_vec((1, 1), [(0, 0)])


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=1, max_size=5))
def test_normal_form_is_irreducible_and_below(G):
    G = [g for g in G if any(g)]
    s = (5, -4, 3)
    f = normal_form_vec(s, G)
    assert sign_leq(f, s)
    assert not any(sign_leq(g, f) for g in G if any(f))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_normal_form_removes_a_compatible_part(G, s):
    G = [g for g in G if any(g)]
    f = normal_form_vec(s, G)
    rest = tuple(a - b for a, b in zip(s, f))
    assert sign_leq(rest, s) and sign_leq(f, s)


def test_single_reducer_multiple():
    assert normal_form_vec((4, -8), [(1, -2)]) == (0, 0)


def test_completion_examples():
    assert set(pottier_completion([(1, 1), (-1, -1)])) == {(1, 1), (-1, -1)}
    assert pottier_completion([]) == []
    F = symmetrize(kernel_basis(((1, 1, -1),)))
    assert set(pottier_completion(F)) >= SIX


def test_minimize_examples():
    assert set(minimize_to_graver([(1, 1), (2, 2), (-1, -1), (-2, -2)])) == {(1, 1), (-1, -1)}
    anti = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    assert set(minimize_to_graver(anti)) == set(anti)
    with pytest.raises(ValueError):
        minimize_to_graver([(0, 0)])


def test_graver_basis_examples():
    assert graver_basis(((1, -1),)).as_set() == {(1, 1), (-1, -1)}
    assert graver_basis(((0,),)).as_set() == {(1,), (-1,)}
    assert graver_basis(((1, 1, -1),)).as_set() == SIX
    assert graver_basis(((1, 0), (0, 1))).as_set() == set()


def test_brute_force_examples():
    assert brute_force_graver(((1, -1),), 3) == {(1, 1), (-1, -1)}
    assert brute_force_graver(((1, 1, -1),), 2) == SIX
    assert brute_force_graver(((1, 0), (0, 1)), 5) == set()


def test_engines_agree_on_classic_example():
    A = ((1, 2, 3, -4),)
    lift = graver_basis(A)
    fifo = graver_basis(A, engine="fifo")
    assert lift.as_set() == fifo.as_set()
    r = 1 + max(max(map(abs, v)) for v in lift)
    assert lift.as_set() == brute_force_graver(A, r)


def test_unknown_engine():
    with pytest.raises(ValueError):
        graver_basis(((1, -1),), engine="nope")


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_graver_invariants(A):
    G = graver_basis(A)
    els = G.as_set()
    assert all(any(v) and not any(mat_vec(A, v)) for v in els)
    assert all(tuple(-x for x in v) in els for v in els)
    for u in els:
        assert not any(u != v and sign_leq(u, v) for v in els)


@settings(max_examples=40, deadline=None)
@given(matrices(max_cols=5))
def test_lift_matches_fifo(A):
    assert graver_basis(A).as_set() == graver_basis(A, engine="fifo").as_set()


def test_lift_matches_fifo_on_larger_lattice():
    # enough elements to exercise the blocked reducer search and pruning
    A = ((1, 1, 0, 0, -1, 0), (0, 1, 2, 1, 0, -2))
    lift = graver_basis(A)
    assert lift.as_set() == graver_basis(A, engine="fifo").as_set()


def test_project_and_lift_handles_sublattices():
    # lattice 2Z x Z: first coordinate is never a unit
    G = project_and_lift([(2, 0), (-2, 0), (0, 1), (0, -1)])
    assert set(G) == {(2, 0), (-2, 0), (0, 1), (0, -1)}


def test_randomized_oracle_equivalence():
    rng = random.Random(7)
    for _ in range(25):
        d = rng.randint(2, 4)
        A = tuple(tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(1, 2)))
        G = graver_basis(A)
        r = 1 + max((max(map(abs, v)) for v in G), default=0)
        assert G.as_set() == brute_force_graver(A, r)


def test_numpy_fallback_matches_compiled(monkeypatch):
    import graverforest.graver as gr
    A = ((1, 1, 0, 0, -1, 0), (0, 1, 2, 1, 0, -2))
    B = ((1, 2, 3, -4),)
    fast = gr.graver_basis(A).as_set(), gr.graver_basis(B).as_set()
    monkeypatch.setattr(gr, "_kernels", None)
    assert (gr.graver_basis(A).as_set(), gr.graver_basis(B).as_set()) == fast


@settings(max_examples=25, deadline=None)
@given(matrices(max_cols=5), st.randoms(use_true_random=False))
def test_lift_order_does_not_matter(A, rnd):
    F = symmetrize(kernel_basis(A))
    order = list(range(len(A[0])))
    rnd.shuffle(order)
    assert project_and_lift(F, order) == project_and_lift(F)


def test_bad_order():
    with pytest.raises(ValueError):
        project_and_lift([(1, -1), (-1, 1)], order=[0, 0])
