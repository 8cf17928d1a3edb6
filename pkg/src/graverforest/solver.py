"""Solving concrete multi-stage instances with a block library."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .blocks import BlockLibrary
from .intlin import (DimensionError, IntVec, mat_vec, neg_part, phase_one_cost,
                     pos_part, solve_diophantine)
from .stochastic import StageFamily, build_a, dims, flatten, nest
from .vtree import VectorTree, widths_of

log = logging.getLogger(__name__)

MODES = ("exhaustive", "paper-greedy")

OPTIMAL = "optimal"
INFEASIBLE_LINEAR = "infeasible-linear"
INFEASIBLE_NONNEGATIVE = "infeasible-nonnegative"
UNBOUNDED = "unbounded"


class LibraryMismatch(ValueError):
    """The library was computed for a different stage family."""


@dataclass(frozen=True)
class ProblemInstance:
    family: StageFamily
    N: int
    b: IntVec
    c: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        rows, cols = dims(self.family, self.family.k, self.N)
        if len(self.b) != rows:
            raise DimensionError(f"rhs has length {len(self.b)}, expected {rows}")
        if len(self.c) != cols:
            raise DimensionError(f"cost has length {len(self.c)}, expected {cols}")

    def matrix(self):
        return build_a(self.family, self.family.k, self.N)

    def objective(self, z: Sequence[int]) -> Fraction:
        return sum((ci * zi for ci, zi in zip(self.c, z)), Fraction(0))


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    solution: Optional[IntVec] = None
    objective: Optional[Fraction] = None


def _dot(c, v):
    return sum((ci * vi for ci, vi in zip(c, v)), Fraction(0))


def _fits(root, zb):
    return all(r <= x for r, x in zip(root, zb))


def _exhaustive(trees, cn, zn, alpha, memo):
    """Best (value, nested vector) over the given trees for one slice, or None."""
    best = None
    for T in trees:
        got = _best_tree(T, cn, zn, alpha, memo)
        if got is not None and (best is None or got[0] > best[0]):
            best = got
    return best


def _best_tree(T, cn, zn, alpha, memo):
    key = (T, alpha)
    if key in memo:
        return memo[key]
    res = None
    if _fits(T.label, zn[0]):
        val = _dot(cn[0], T.label)
        kids = []
        for i, (cc, zc) in enumerate(zip(cn[1], zn[1]), 1):
            got = _exhaustive(T.children, cc, zc, alpha + (i,), memo)
            if got is None:
                break
            val += got[0]
            kids.append(got[1])
        else:
            res = (val, (T.label, tuple(kids)))
    memo[key] = res
    return res


def _greedy(trees, cn, zn):
    """Literal control flow: try roots by descending root cost, first full success wins."""
    cand = [T for T in trees if _fits(T.label, zn[0])]
    # stable sort keeps canonical order among equal root costs
    cand.sort(key=lambda T: -_dot(cn[0], T.label))
    for T in cand:
        kids = []
        for cc, zc in zip(cn[1], zn[1]):
            got = _greedy(T.children, cc, zc)
            if got is None:
                break
            kids.append(got)
        else:
            return (T.label, tuple(kids))
    return None


def most_expensive(N: int, G: Iterable[VectorTree], c: Sequence, z: Sequence[int],
                   mode: str = "exhaustive") -> Optional[IntVec]:
    """v in <G>_N with v <= z maximizing c.v, or None if no such v exists.

    Ties go to the first tree in canonical order. ``mode="paper-greedy"``
    follows the literal greedy loop instead, which need not maximize.
    """
    G = sorted(set(G), key=lambda t: t.key)
    if not G:
        return None
    w = widths_of(G[0])
    c = tuple(Fraction(x) for x in c)
    cn, zn = nest(c, w, N), nest(tuple(z), w, N)
    if mode == "exhaustive":
        got = _exhaustive(G, cn, zn, (), {})
        node = None if got is None else got[1]
    elif mode == "paper-greedy":
        node = _greedy(G, cn, zn)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return None if node is None else flatten(node)


def _check_feasible(inst, z, A=None):
    A = A or inst.matrix()
    if tuple(mat_vec(A, z)) != inst.b:
        raise ValueError("point does not satisfy A z = b")


def optimal_solution(inst: ProblemInstance, lib: BlockLibrary, z: Sequence[int],
                     mode: str = "exhaustive") -> IntVec:
    """Augment a feasible z along most expensive constructible vectors."""
    z = tuple(z)
    _check_feasible(inst, z)
    if min(z, default=0) < 0:
        raise ValueError("optimal_solution needs z >= 0")
    G = lib.top()
    obj = inst.objective(z)
    steps = 0
    while True:
        v = most_expensive(inst.N, G, inst.c, z, mode)
        if v is None or _dot(inst.c, v) <= 0:
            return z
        z = tuple(a - b for a, b in zip(z, v))
        new = inst.objective(z)
        if new >= obj or min(z) < 0:
            raise AssertionError("augmentation step did not improve a feasible point")
        obj = new
        steps += 1
        log.debug("augmentation step %d objective %s", steps, obj)


def feasible_solution(inst: ProblemInstance, lib: BlockLibrary, z: Sequence[int],
                      mode: str = "exhaustive", literal: bool = False,
                      max_steps: int = 10_000) -> Optional[IntVec]:
    """Phase I: push an integral solution of A z = b into z >= 0, or None.

    ``literal=True`` uses the uncorrected auxiliary cost; it carries no
    progress guarantee, so it is capped at ``max_steps`` iterations.
    """
    z = tuple(z)
    _check_feasible(inst, z)
    G = lib.top()
    deficit = sum(neg_part(z))
    for _ in range(max_steps):
        cz = phase_one_cost(z, literal=literal)
        v = most_expensive(inst.N, G, cz, pos_part(z), mode)
        if v is None or _dot(cz, v) <= 0:
            break
        z = tuple(a - b for a, b in zip(z, v))
        new = sum(neg_part(z))
        if not literal and new >= deficit:
            raise AssertionError("phase one step did not reduce the negative part")
        deficit = new
    else:
        if not literal:
            raise AssertionError("phase one did not terminate")
        return None
    return z if min(z, default=0) >= 0 else None


def solve(inst: ProblemInstance, lib: BlockLibrary, mode: str = "exhaustive") -> SolveOutcome:
    """Integral point, then phase one, then augmentation to optimality.

    An instance whose objective is unbounded below on the feasible set is
    reported as such (augmentation would not stop).
    """
    if lib.family.digest != inst.family.digest:
        raise LibraryMismatch("library was computed for a different family")
    A = inst.matrix()
    z = solve_diophantine(A, inst.b)
    if z is None:
        return SolveOutcome(INFEASIBLE_LINEAR)
    f = feasible_solution(inst, lib, z, mode)
    if f is None:
        return SolveOutcome(INFEASIBLE_NONNEGATIVE)
    # an improving v <= 0 is a ray of the feasible region
    ray = most_expensive(inst.N, lib.top(), inst.c, (0,) * len(f), "exhaustive")
    if ray is not None and _dot(inst.c, ray) > 0:
        return SolveOutcome(UNBOUNDED, f, None)
    opt = optimal_solution(inst, lib, f, mode)
    return SolveOutcome(OPTIMAL, opt, inst.objective(opt))
