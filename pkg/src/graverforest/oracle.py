"""Brute-force oracles: bounded kernel enumeration and IP enumeration.

These share no code with the HNF / completion path they are used to check.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .intlin import IntMatrix, IntVec, ncols

Box = Union[int, Sequence[int]]

_INNER_POINTS = 200_000


def _radii(box: Box, d: int) -> list:
    if isinstance(box, int):
        radii = [box] * d
    else:
        radii = [int(r) for r in box]
        if len(radii) != d:
            raise ValueError("box has wrong dimension")
    if any(r < 0 for r in radii):
        raise ValueError("box radius must be nonnegative")
    return radii


def enumerate_kernel_box(A: IntMatrix, box: Box) -> set:
    """All z with A z = 0 and |z_j| <= radius_j (the zero vector included)."""
    d = ncols(A)
    radii = _radii(box, d)
    M = np.array(A, dtype=np.int64).reshape(len(A), d)
    bound = int(np.abs(M).sum()) * max(radii, default=0)
    if bound >= 2**62:
        raise OverflowError("kernel box too large for int64 enumeration")

    # split coordinates: the tail is enumerated as one numpy grid
    split = d
    size = 1
    while split > 0 and size * (2 * radii[split - 1] + 1) <= _INNER_POINTS:
        split -= 1
        size *= 2 * radii[split] + 1
    inner_ranges = [np.arange(-r, r + 1, dtype=np.int64) for r in radii[split:]]
    if inner_ranges:
        grid = np.stack(np.meshgrid(*inner_ranges, indexing="ij"), -1)
        grid = grid.reshape(-1, d - split)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    inner_img = grid @ M[:, split:].T

    out = set()
    outer = itertools.product(*(range(-r, r + 1) for r in radii[:split]))
    for head in outer:
        head_img = M[:, :split] @ np.array(head, dtype=np.int64)
        hits = np.nonzero(~(inner_img + head_img).any(axis=1))[0]
        for row in grid[hits]:
            out.add(tuple(head) + tuple(int(x) for x in row))
    return out


def minimal_nonzero(vectors: Iterable[IntVec], d: int) -> set:
    """⊑-minimal nonzero members of a finite vector set."""
    vs = [v for v in vectors if any(v)]
    if not vs:
        return set()
    X = np.array(vs, dtype=np.int64).reshape(len(vs), d)
    norms = np.abs(X).sum(axis=1)
    order = np.argsort(norms, kind="stable")
    X, norms = X[order], norms[order]
    minimal = np.zeros((0, d), dtype=np.int64)
    start = 0
    while start < len(X):
        stop = start
        while stop < len(X) and norms[stop] == norms[start]:
            stop += 1
        batch = X[start:stop]
        if len(minimal):
            keep = np.ones(len(batch), dtype=bool)
            for lo in range(0, len(batch), 4096):
                B = batch[lo:lo + 4096, None, :]
                below = ((minimal[None] * B >= 0)
                         & (np.abs(minimal)[None] <= np.abs(B))).all(axis=2)
                keep[lo:lo + 4096] = ~below.any(axis=1)
            batch = batch[keep]
        # equal 1-norm vectors cannot lie strictly below one another
        minimal = np.concatenate([minimal, batch])
        start = stop
    return {tuple(int(x) for x in row) for row in minimal}


def iter_fiber(A: IntMatrix, b: Sequence[int], box: Box):
    """Yield every z >= 0 with A z = b and z_j <= box_j, lexicographically.

    Partial assignments are pruned with per-row interval bounds on the
    unassigned coordinates.
    """
    d = ncols(A)
    ub = _radii(box, d)
    m = len(A)
    if len(b) != m:
        raise ValueError("rhs length does not match row count")
    lo_suf = [[0] * (d + 1) for _ in range(m)]
    hi_suf = [[0] * (d + 1) for _ in range(m)]
    for r in range(m):
        for j in range(d - 1, -1, -1):
            t = A[r][j] * ub[j]
            lo_suf[r][j] = lo_suf[r][j + 1] + min(0, t)
            hi_suf[r][j] = hi_suf[r][j + 1] + max(0, t)
    cols = [[A[r][j] for r in range(m)] for j in range(d)]
    z = [0] * d
    need = list(b)

    def rec(j):
        for r in range(m):
            if need[r] < lo_suf[r][j] or need[r] > hi_suf[r][j]:
                return
        if j == d:
            yield tuple(z)
            return
        col = cols[j]
        for x in range(ub[j] + 1):
            z[j] = x
            yield from rec(j + 1)
            for r in range(m):
                need[r] -= col[r]
        for r in range(m):
            need[r] += col[r] * (ub[j] + 1)
        z[j] = 0

    yield from rec(0)


def fiber_points(A: IntMatrix, b: Sequence[int], box: Box) -> list:
    return list(iter_fiber(A, b, box))


def brute_force_ip(A: IntMatrix, b: Sequence[int], c: Sequence,
                   box: Box) -> Optional[Tuple[IntVec, Fraction]]:
    """Exact minimum of c.z over the bounded fiber, by enumeration.

    Returns ``(z, objective)`` for the lexicographically first minimizer, or
    None when no z >= 0 with A z = b lies in the box.
    """
    cost = [Fraction(x) for x in c]
    best = None
    for z in iter_fiber(A, b, box):
        obj = sum(ci * zi for ci, zi in zip(cost, z))
        if best is None or obj < best[1]:
            best = (z, obj)
    return best
