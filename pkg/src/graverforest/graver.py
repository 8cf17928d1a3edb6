"""Graver bases by completion: project-and-lift (default) or a plain FIFO loop.

The lift engine runs its inner loops through numba when it is installed and
falls back to batched numpy otherwise; both give the same sets.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .intlin import (DimensionError, IntMatrix, IntVec, add, hermite_normal_form,
                     is_zero, kernel_basis, mat_vec, ncols, neg, norm1, sign_leq)

try:
    from . import _kernels
except ImportError:  # numba not installed
    _kernels = None


def symmetrize(vectors: Iterable[IntVec]) -> list:
    """Close a vector set under negation; output sorted and duplicate free."""
    out = set()
    for v in vectors:
        out.add(tuple(v))
        out.add(neg(v))
    return sorted(out)


def _reduce_by(s: list, g: IntVec) -> bool:
    """Subtract the largest multiple t*g with t*g sign-below s, in place."""
    t = None
    for x, y in zip(g, s):
        if x == 0:
            continue
        if x * y <= 0 or abs(x) > abs(y):
            return False
        q = abs(y) // abs(x)
        t = q if t is None else min(t, q)
    if not t:
        return False
    for j, x in enumerate(g):
        if x:
            s[j] -= t * x
    return True


def normal_form_vec(s: IntVec, G: Sequence[IntVec]) -> IntVec:
    """Reduce ``s`` by elements of ``G`` until no ``g`` in ``G`` has g ⊑ s.

    Reducers are tried in the order given. One pass suffices: if ``g`` does
    not lie below ``s`` it does not lie below any reduction of ``s`` either,
    because reductions only shrink ``s`` in the sign order.
    """
    out = list(s)
    for g in G:
        if len(g) != len(out):
            raise DimensionError("reducer dimension mismatch")
        if is_zero(g):
            raise ValueError("zero vector in reducer set")
        if not any(out):
            break
        _reduce_by(out, g)
    return tuple(out)


def pottier_completion(F: Iterable[IntVec]) -> list:
    """Completion of a symmetric generating set of ker(A).

    Returns a list (insertion order) of nonzero kernel vectors containing the
    Graver basis. Candidates are processed first in, first out, and a
    candidate is never queued twice.
    """
    G = [v for v in sorted(set(map(tuple, F))) if not is_zero(v)]
    if not G:
        return []
    dim = len(G[0])
    if any(len(v) != dim for v in G):
        raise DimensionError("generators of different lengths")

    queue = deque()
    seen = set()

    def push(s):
        if s not in seen and not is_zero(s):
            seen.add(s)
            queue.append(s)

    for i, f in enumerate(G):
        for g in G[i:]:
            push(add(f, g))

    members = set(G)
    while queue:
        s = queue.popleft()
        f = normal_form_vec(s, G)
        if is_zero(f) or f in members:
            continue
        for g in G:
            push(add(f, g))
        G.append(f)
        members.add(f)
    return G


_ENTRY_LIMIT = 2**31


_WORD = 62
_BLOCK = 512
_ROWS = 8192


def _support_masks(X, c):
    """Bitmasks of the positive and negative supports of X[:, :c], 62 bits per word."""
    P = X[:, :c]
    words = []
    for lo in range(0, c, _WORD):
        w = np.left_shift(np.int64(1), np.arange(min(_WORD, c - lo), dtype=np.int64))
        blk = P[:, lo:lo + _WORD]
        words.append(((blk > 0).astype(np.int64) @ w, (blk < 0).astype(np.int64) @ w))
    return words


def _first_reducers(S, G, c, Gmasks=None):
    """Index of the first row g of G with g ⊑ s on columns [0, c) (-1: none).

    G is scanned in blocks; a row of S leaves the search as soon as a block
    holds a reducer. Sign supports are compared as bitmasks first.
    """
    out = np.full(len(S), -1, dtype=np.int64)
    if not len(G) or not len(S):
        return out
    if Gmasks is None:
        Gmasks = _support_masks(G, c)
    if len(S) > _ROWS:
        for lo in range(0, len(S), _ROWS):
            out[lo:lo + _ROWS] = _first_reducers(S[lo:lo + _ROWS], G, c, Gmasks)
        return out
    Smasks = _support_masks(S, c)
    Ga, Sa = np.abs(G[:, :c]), np.abs(S[:, :c])
    todo = np.arange(len(S))
    for lo in range(0, len(G), _BLOCK):
        if not len(todo):
            break
        hi = lo + _BLOCK
        fits = None
        for (gp, gn), (sp, sn) in zip(Gmasks, Smasks):
            bad = (gp[None, lo:hi] & ~sp[todo, None]) | (gn[None, lo:hi] & ~sn[todo, None])
            fits = (bad == 0) if fits is None else fits & (bad == 0)
        r, g = np.nonzero(fits)
        if not len(r):
            continue
        ok = (Ga[lo + g] <= Sa[todo[r]]).all(axis=1)
        r, g = r[ok], g[ok]
        # np.nonzero is row-major, so the first hit per row is the first reducer
        rows, first = np.unique(r, return_index=True)
        out[todo[rows]] = lo + g[first]
        todo = np.delete(todo, rows)
    return out


def _batch_normal_form(S, G, c):
    """Reduce every row of S by rows of G, comparing on columns [0, c)."""
    S = S.copy()
    active = np.arange(len(S))
    big = np.iinfo(np.int64).max
    Gmasks = _support_masks(G, c)
    while len(active):
        idx = _first_reducers(S[active], G, c, Gmasks)
        active, idx = active[idx >= 0], idx[idx >= 0]
        if not len(active):
            break
        g = G[idx]
        gp, sp = np.abs(g[:, :c]), np.abs(S[active, :c])
        t = np.where(gp > 0, sp // np.maximum(gp, 1), big).min(axis=1)
        S[active] -= t[:, None] * g
    return S


def _minimal_rows(X, c):
    """Rows of X whose projection to [0, c) is ⊑-minimal; one row per projection."""
    P = X[:, :c]
    order = np.argsort(np.abs(P).sum(axis=1), kind="stable")
    X, P = X[order], P[order]
    _, first = np.unique(P, axis=0, return_index=True)
    keep = np.zeros(len(X), dtype=bool)
    keep[first] = True
    X = X[keep]
    if _kernels is not None:
        return X[_kernels.minimal_mask(np.ascontiguousarray(X), c)]
    # strict dominators have smaller norm and come first, so a row is
    # minimal iff its first reducer is the row itself
    return X[_first_reducers(X, X, c) == np.arange(len(X))]


def project_and_lift(F: Iterable[IntVec], order: Sequence[int] = None) -> list:
    """Graver basis of the lattice generated by ``F``, one coordinate at a time.

    After step j the working set contains, for the projection of the lattice
    onto the first j+1 coordinates, a set in which every lattice vector is a
    sign-compatible (on those coordinates) nonnegative combination. Going
    from j to j+1 only needs sums of pairs that are sign compatible on the
    old coordinates and of opposite sign in the new one, plus the lattice
    vector that vanishes on the old coordinates (if any). Candidates are
    reduced with int64 entries under a hard size guard.

    ``order`` is the sequence in which columns are lifted (default: left to
    right). The result does not depend on it; the running time can.
    """
    F = [tuple(v) for v in F if not is_zero(v)]
    if not F:
        return []
    d = len(F[0])
    if any(len(v) != d for v in F):
        raise DimensionError("generators of different lengths")
    if order is not None:
        order = list(order)
        if sorted(order) != list(range(d)):
            raise ValueError("order must be a permutation of the columns")
        G = project_and_lift([tuple(v[p] for p in order) for v in F])
        back = [0] * d
        for i, p in enumerate(order):
            back[p] = i
        return sorted(tuple(v[back[p]] for p in range(d)) for v in G)
    # echelon basis: column p of H is zero above its pivot row
    H, _ = hermite_normal_form(tuple(tuple(v[j] for v in F) for j in range(d)))
    pivot = {}
    for p in range(len(F)):
        col = [H[j][p] for j in range(d)]
        nz = [j for j, x in enumerate(col) if x]
        if nz:
            pivot[nz[0]] = col
    if any(abs(x) >= _ENTRY_LIMIT for col in pivot.values() for x in col):
        raise OverflowError("lattice basis too large for int64 completion")

    G = np.zeros((0, d), dtype=np.int64)
    for j in range(d):
        c = j + 1
        if j in pivot:
            w = np.array(pivot[j], dtype=np.int64)
            G = np.concatenate([G, w[None], -w[None]])
        if _kernels is not None:
            G, status = _kernels.lift_step(np.ascontiguousarray(G), j, _ENTRY_LIMIT)
            if status:
                raise OverflowError("completion entries exceed the int64 guard")
        else:
            G = _lift_step(G, j)
        G = _minimal_rows(G, c)
    return sorted(tuple(int(x) for x in row) for row in G)


def _lift_step(G0, j):
    c = j + 1
    d = G0.shape[1]
    G = np.zeros((max(16, 2 * len(G0)), d), dtype=np.int64)
    m = 0
    buckets = {}
    heap = []
    seen = set()

    def enqueue(cands):
        if not len(cands):
            return
        if np.abs(cands).max() >= _ENTRY_LIMIT:
            raise OverflowError("completion entries exceed the int64 guard")
        norms = np.abs(cands[:, :c]).sum(axis=1)
        for row, nrm in zip(cands, norms.tolist()):
            key = row.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if nrm not in buckets:
                buckets[nrm] = []
                heapq.heappush(heap, nrm)
            buckets[nrm].append(row)

    def append(rows):
        nonlocal G, m
        for f in rows:
            if m == len(G):
                G = np.concatenate([G, np.zeros_like(G)])
            if f[j] and m:
                cur = G[:m]
                pair = (cur[:, j] * f[j] < 0) & ~(np.sign(cur[:, :j]) * np.sign(f[:j]) < 0).any(axis=1)
                enqueue(cur[pair] + f)
            G[m] = f
            m += 1

    append(G0)
    while heap:
        nrm = heapq.heappop(heap)
        batch = np.array(buckets.pop(nrm))
        while len(batch):
            red = _batch_normal_form(batch, G[:m], c)
            red = red[red[:, :c].any(axis=1)]
            if not len(red):
                break
            fresh = _minimal_rows(red, c)
            append(fresh)
            batch = red
    return G[:m]


def minimize_to_graver(G: Iterable[IntVec]) -> list:
    """The ⊑-minimal elements of ``G``, sorted."""
    vs = sorted(set(map(tuple, G)), key=lambda v: (norm1(v), v))
    if any(is_zero(v) for v in vs):
        raise ValueError("zero vector in input")
    minimal = []
    for v in vs:
        # u ⊑ v with u != v forces norm1(u) < norm1(v)
        if not any(sign_leq(u, v) for u in minimal):
            minimal.append(v)
    return sorted(minimal)


@dataclass(frozen=True)
class GraverBasis:
    matrix: IntMatrix
    elements: tuple

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, v):
        return tuple(v) in set(self.elements)

    def as_set(self) -> frozenset:
        return frozenset(self.elements)


def graver_basis(A: IntMatrix, raw: bool = False, engine: str = "lift") -> GraverBasis:
    """Graver basis of ``A``: kernel basis, symmetrize, complete, minimize.

    ``raw=True`` skips the minimization pass and keeps the completion output.
    ``engine`` selects the completion: "lift" (project-and-lift, batched) or
    "fifo" (plain first-in first-out loop over all pairs).
    """
    F = symmetrize(kernel_basis(A))
    if engine == "lift":
        # stage matrices carry their coupling columns first; lifting those
        # last keeps the intermediate sets much smaller
        G = project_and_lift(F, order=range(ncols(A) - 1, -1, -1))
    elif engine == "fifo":
        G = pottier_completion(F)
    else:
        raise ValueError(f"unknown completion engine {engine!r}")
    # the lift output is minimal already
    elems = sorted(G) if raw or engine == "lift" else minimize_to_graver(G)
    for v in elems:
        if any(mat_vec(A, v)):
            raise AssertionError(f"completion produced non-kernel vector {v}")
    return GraverBasis(A, tuple(elems))


def brute_force_graver(A: IntMatrix, radius: int) -> set:
    """⊑-minimal nonzero kernel vectors with entries in [-radius, radius]."""
    from .oracle import enumerate_kernel_box, minimal_nonzero

    if radius < 1:
        raise ValueError("radius must be positive")
    return minimal_nonzero(enumerate_kernel_box(A, radius), ncols(A))
