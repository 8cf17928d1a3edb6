"""Random generators shared by the test modules."""
import random
import sys
import time

from graverforest.stochastic import StageFamily
from graverforest.vtree import VectorTree


def random_family(rng: random.Random, k: int, l: int = 1, widths=(1, 2), lo=-2, hi=2):
    stages = []
    for _ in range(k + 1):
        n = rng.choice(widths)
        stages.append(tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(l)))
    return StageFamily(tuple(stages))


def random_tree(rng, widths, lo=-1, hi=1, max_kids=2):
    label = tuple(rng.randint(lo, hi) for _ in range(widths[0]))
    if len(widths) == 1:
        return VectorTree(label)
    kids = [random_tree(rng, widths[1:], lo, hi, max_kids)
            for _ in range(rng.randint(1, max_kids))]
    return VectorTree(label, kids)


def shrink(rng, v):
    """A random vector sign-below v."""
    return tuple(x - (1 if x > 0 else -1) * rng.randint(0, abs(x)) if x else 0 for x in v)


def random_reducer(rng, S, extra=0.3):
    """A random tree T with T reducing S."""
    label = shrink(rng, S.label)
    if not S.children:
        return VectorTree(label)
    kids = [random_reducer(rng, c, extra) for c in S.children]
    if rng.random() < extra:
        kids.append(random_tree(rng, [len(t.label) for t in _spine(S.children[0])]))
    return VectorTree(label, kids)


def _spine(T):
    out = [T]
    while out[-1].children:
        out.append(out[-1].children[0])
    return out


def bounded_family(rng: random.Random, k: int, widths=(1, 2), lo=-2, hi=2, max_path=None):
    """Random family whose second row sums the variables of each stage.

    Every variable then sits in a row of ones, so z >= 0 and A z = b force
    z <= max(b): the fiber is finite and brute force is exact. ``max_path``
    caps the summed stage widths (widths are redrawn until it holds).
    """
    while True:
        ns = [rng.choice(widths) for _ in range(k + 1)]
        if max_path is None or sum(ns) <= max_path:
            break
    stages = [(tuple(rng.randint(lo, hi) for _ in range(n)), (1,) * n) for n in ns]
    return StageFamily(tuple(stages))


def feasible_rhs(rng, A, hi=2):
    z0 = tuple(rng.randint(0, hi) for _ in range(len(A[0])))
    return tuple(sum(a * x for a, x in zip(row, z0)) for row in A)


# (criterion, part, passed, seconds, note) rows, printed by conftest
ACCEPTANCE = []


class criterion:
    """Time a block, record pass/fail, and fail it when over budget."""

    def __init__(self, cid, part, budget):
        self.cid, self.part, self.budget = cid, part, budget
        self.note = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        secs = time.perf_counter() - self.t0
        passed = exc_type is None and secs <= self.budget
        note = self.note
        if exc_type is not None:
            note = note or f"{exc_type.__name__}: {exc}".splitlines()[0][:160]
        elif secs > self.budget:
            note = f"over budget {self.budget}s"
        line = f"criterion {self.cid} [{self.part}]: {'PASS' if passed else 'FAIL'} ({secs:.1f}s)"
        print(line, file=sys.stderr)
        ACCEPTANCE.append((self.cid, self.part, passed, secs, note))
        if exc_type is None and not passed:
            raise AssertionError(note)
        return False
