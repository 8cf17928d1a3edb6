"""Building blocks: tree completion and the level-by-level library build."""
from __future__ import annotations

import bisect
import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .graver import symmetrize
from .intlin import IntVec, kernel_basis, sign_leq
from .stochastic import StageFamily, build_a
from .vtree import (VectorTree, _subtract, add, chain, negate, reduces,
                    value_of)

log = logging.getLogger(__name__)


def generators(family: StageFamily, i: int) -> list:
    """Symmetric generating set F_i of ker(A_{i,1}).

    For i > 0 the set also contains 0-padded generators of ker(A_{i-1,1}),
    i.e. generators of the part of the kernel with zero root block.
    """
    family._check_stage(i)
    gens = list(kernel_basis(build_a(family, i, 1)))
    if i > 0:
        pad = (0,) * family.n(i)
        gens += [pad + v for v in kernel_basis(build_a(family, i - 1, 1))]
    return symmetrize(gens)


def generators_with_k0(family: StageFamily, i: int) -> list:
    if i < 1:
        raise ValueError("generators_with_k0 needs 1 <= i <= k")
    return generators(family, i)


class _Reducers:
    """Nonzero-root trees kept in canonical order."""

    def __init__(self):
        self.keys = []
        self.trees = []

    def insert(self, T):
        if not any(T.label):
            return
        pos = bisect.bisect_left(self.keys, T.key)
        self.keys.insert(pos, T.key)
        self.trees.insert(pos, T)

    def normal_form(self, S):
        while True:
            for T in self.trees:
                if sign_leq(T.label, S.label) and reduces(T, S):
                    S = _subtract(S, T)
                    break
            else:
                return S


def tree_completion(G: Iterable[VectorTree], family: Optional[StageFamily] = None,
                    on_step: Optional[Callable[[int, int, int], None]] = None) -> list:
    """Extend a symmetric set of value-0 trees to a root-complete one.

    Candidates S+T are processed first in, first out; a candidate is queued
    at most once. Whenever a normal form with nonzero root appears, it and
    its negative join the set and their sums with every member (themselves
    included) become candidates. When ``family`` is given, input symmetry and
    zero value are checked.
    """
    G = sorted(set(G), key=lambda t: t.key)
    members = set(G)
    for T in G:
        if negate(T) not in members:
            raise ValueError(f"input is not symmetric: missing -{T}")
        if family is not None:
            val = value_of(T, family)
            if val is None or any(val):
                raise ValueError(f"input tree {T} does not have value 0")

    reducers = _Reducers()
    for T in G:
        reducers.insert(T)

    queue = deque()
    seen = set()

    def push(S):
        if S not in seen:
            seen.add(S)
            queue.append(S)

    for i, S in enumerate(G):
        for T in G[i:]:
            push(add(S, T))

    steps = 0
    while queue:
        S = queue.popleft()
        steps += 1
        Tn = reducers.normal_form(S)
        if on_step is not None:
            on_step(steps, len(queue), len(G))
        if not any(Tn.label):
            continue
        new = [X for X in (Tn, negate(Tn)) if X not in members]
        for X in new:
            G.append(X)
            members.add(X)
            reducers.insert(X)
        for X in new:
            for S2 in G:
                push(add(S2, X))
    return G


@dataclass(frozen=True)
class BlockLibrary:
    family: StageFamily
    levels: Tuple[Tuple[VectorTree, ...], ...]

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    def top(self) -> Tuple[VectorTree, ...]:
        return self.levels[-1]


def zero_root_tree(family: StageFamily, i: int, below: Sequence[VectorTree]) -> VectorTree:
    """Tree with zero root whose subtrees cover the zero path and all of ``below``."""
    w = family.widths(i)
    zero_child = chain((0,) * sum(w[1:]), w[1:])
    return VectorTree((0,) * w[0], [zero_child, *below])


def compute_blocks(family: StageFamily, prune: bool = False,
                   on_step: Optional[Callable[[int, int, int, int], None]] = None
                   ) -> BlockLibrary:
    """Compute G_0..G_k with G(A_{i,N}) inside <G_i>_N for every N.

    ``prune`` drops trees reduced by another member of the same level; that
    filter is not covered by the correctness argument and is off by default.
    """
    levels = []
    for i in range(family.k + 1):
        w = family.widths(i)
        start = [chain(v, w) for v in generators(family, i)]
        if i > 0:
            start.append(zero_root_tree(family, i, levels[-1]))
        step = None if on_step is None else (lambda a, b, c, i=i: on_step(i, a, b, c))
        G = tree_completion(start, family.truncate(i), on_step=step)
        if prune:
            G = _prune(G)
        log.info("level %d: %d trees", i, len(G))
        levels.append(tuple(sorted(G, key=lambda t: t.key)))
    return BlockLibrary(family, tuple(levels))


def _prune(G):
    keep = []
    for T in G:
        if not any(S is not T and S != T and reduces(S, T) for S in G):
            keep.append(T)
    return keep


@dataclass(frozen=True)
class BuildingBlockSet:
    per_height: Tuple[frozenset, ...]


def building_blocks(lib: BlockLibrary) -> BuildingBlockSet:
    """Node labels of the top-level trees, grouped by depth below the root."""
    k = lib.k
    buckets = [set() for _ in range(k + 1)]

    def rec(t, depth):
        buckets[depth].add(t.label)
        for c in t.children:
            rec(c, depth + 1)

    for T in lib.top():
        rec(T, 0)
    return BuildingBlockSet(tuple(frozenset(b) for b in buckets))
