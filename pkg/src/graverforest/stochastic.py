"""The multi-stage matrix family and scenario-structured vectors.

A vector of height h for N scenarios is laid out recursively as
``[z_root | child 1 | ... | child N]`` where every child is a vector of
height h-1 with the same layout. Scenario indices are 1-based tuples, so the
lexicographic order of ``[1, N]^s`` is the order in which blocks appear.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Tuple

from .intlin import DimensionError, IntMatrix, IntVec, matrix, ncols

Nested = tuple  # (block, (child, ...)); leaves have no children


@dataclass(frozen=True)
class StageFamily:
    """Matrices T_0..T_k, each with ``l`` rows."""

    stages: Tuple[IntMatrix, ...]

    def __post_init__(self):
        stages = tuple(matrix(T) for T in self.stages)
        object.__setattr__(self, "stages", stages)
        if not stages:
            raise ValueError("a family needs at least T_0")
        l = len(stages[0])
        if l < 1:
            raise ValueError("stage matrices need at least one row")
        for s, T in enumerate(stages):
            if len(T) != l:
                raise DimensionError(f"T_{s} has {len(T)} rows, expected {l}")
            if ncols(T) < 1:
                raise DimensionError(f"T_{s} has no columns")

    @property
    def k(self) -> int:
        return len(self.stages) - 1

    @property
    def l(self) -> int:
        return len(self.stages[0])

    def n(self, s: int) -> int:
        return ncols(self.stages[s])

    def widths(self, h: int) -> Tuple[int, ...]:
        """Block widths along a root-to-leaf path of a height-h vector."""
        self._check_stage(h)
        return tuple(self.n(s) for s in range(h, -1, -1))

    def path_length(self, h: int) -> int:
        return sum(self.widths(h))

    def truncate(self, h: int) -> "StageFamily":
        self._check_stage(h)
        return StageFamily(self.stages[:h + 1])

    def _check_stage(self, s: int) -> None:
        if not 0 <= s <= self.k:
            raise ValueError(f"stage {s} out of range 0..{self.k}")

    def path_value(self, v: Sequence[int], h: int) -> IntVec:
        """T_h v_0 + T_{h-1} v_1 + ... + T_0 v_h for a path label v."""
        w = self.widths(h)
        if len(v) != sum(w):
            raise DimensionError("path label has wrong length")
        out = [0] * self.l
        off = 0
        for depth, width in enumerate(w):
            T = self.stages[h - depth]
            block = v[off:off + width]
            for r in range(self.l):
                out[r] += sum(a * x for a, x in zip(T[r], block))
            off += width
        return tuple(out)

    def serialize(self) -> str:
        lines = [f"{self.k} {self.l}"]
        for T in self.stages:
            lines.append(str(ncols(T)))
            lines.extend(" ".join(str(x) for x in row) for row in T)
        return "\n".join(lines) + "\n"

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()


def size(widths: Sequence[int], N: int) -> int:
    """Length of a vector with the given path widths and N scenarios."""
    d = 0
    for w in reversed(widths):
        d = w + N * d
    return d


def dims(family: StageFamily, s: int, N: int) -> Tuple[int, int]:
    """(rows, cols) of A_{s,N}."""
    family._check_stage(s)
    _check_n(N)
    return N ** s * family.l, sum(N ** (s - i) * family.n(i) for i in range(s + 1))


def _check_n(N: int) -> None:
    if N < 1:
        raise ValueError("N must be a positive integer")


def build_a(family: StageFamily, s: int, N: int) -> IntMatrix:
    """Materialize A_{s,N} (only sensible for small s and N)."""
    family._check_stage(s)
    _check_n(N)
    A = [list(row) for row in family.stages[0]]
    for t in range(1, s + 1):
        T = family.stages[t]
        sub_rows, sub_cols = len(A), len(A[0])
        n_t = ncols(T)
        rows = []
        for i in range(N):
            for r in range(sub_rows):
                row = list(T[r % family.l]) + [0] * (N * sub_cols)
                row[n_t + i * sub_cols:n_t + (i + 1) * sub_cols] = A[r]
                rows.append(row)
        A = rows
    return tuple(tuple(row) for row in A)


def scenario_indices(N: int, s: int) -> Iterator[Tuple[int, ...]]:
    """[1, N]^s in lexicographic order."""
    return itertools.product(range(1, N + 1), repeat=s)


def _check_alpha(alpha, height, N, full=False):
    if len(alpha) > height or (full and len(alpha) != height):
        raise IndexError(f"scenario index {alpha} invalid for height {height}")
    if any(not 1 <= a <= N for a in alpha):
        raise IndexError(f"scenario index {alpha} outside [1, {N}]")


def nest(z: Sequence[int], widths: Sequence[int], N: int) -> Nested:
    """Flat canonical layout -> nested (block, children) form."""
    if len(z) != size(widths, N):
        raise DimensionError(f"vector of length {len(z)}, layout needs {size(widths, N)}")

    def rec(off, depth):
        w = widths[depth]
        block = tuple(z[off:off + w])
        if depth == len(widths) - 1:
            return (block, ())
        child = size(widths[depth + 1:], N)
        return (block, tuple(rec(off + w + i * child, depth + 1) for i in range(N)))

    return rec(0, 0)


def flatten(node: Nested) -> IntVec:
    out = []

    def rec(nd):
        out.extend(nd[0])
        for ch in nd[1]:
            rec(ch)

    rec(node)
    return tuple(out)


@dataclass(frozen=True)
class StochVector:
    """A vector in Z^{d_{h,N}} together with its block structure."""

    family: StageFamily
    height: int
    N: int
    data: IntVec

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(int(x) for x in self.data))
        _check_n(self.N)
        if len(self.data) != size(self.widths, self.N):
            raise DimensionError("data length does not match d_{h,N}")

    @property
    def widths(self) -> Tuple[int, ...]:
        return self.family.widths(self.height)

    def nested(self) -> Nested:
        return nest(self.data, self.widths, self.N)

    def block_at(self, alpha: Sequence[int]) -> IntVec:
        """The building block z_alpha."""
        alpha = tuple(alpha)
        _check_alpha(alpha, self.height, self.N)
        w = self.widths
        off = 0
        for depth, a in enumerate(alpha):
            off += w[depth] + (a - 1) * size(w[depth + 1:], self.N)
        return self.data[off:off + w[len(alpha)]]

    def blocks(self):
        """(alpha, z_alpha) for every index, in layout order."""
        out = []

        def rec(nd, alpha):
            out.append((alpha, nd[0]))
            for i, ch in enumerate(nd[1], 1):
                rec(ch, alpha + (i,))

        rec(self.nested(), ())
        return out

    def path_vector(self, alpha: Sequence[int]) -> IntVec:
        alpha = tuple(alpha)
        _check_alpha(alpha, self.height, self.N, full=True)
        return sum((self.block_at(alpha[:s]) for s in range(self.height + 1)), ())

    def paths(self) -> set:
        return {self.path_vector(a) for a in scenario_indices(self.N, self.height)}

    def is_kernel_member(self) -> bool:
        return all(not any(self.family.path_value(v, self.height)) for v in self.paths())


def _split_path(v: Sequence[int], widths: Sequence[int]) -> list:
    if len(v) != sum(widths):
        raise DimensionError("path vector has wrong length")
    out, off = [], 0
    for w in widths:
        out.append(tuple(v[off:off + w]))
        off += w
    return out


def lift_path(family: StageFamily, h: int, v: Sequence[int], N: int) -> StochVector:
    """The vector whose every root-to-leaf path is labeled v."""
    parts = _split_path(v, family.widths(h))

    def rec(depth):
        if depth == h:
            return (parts[depth], ())
        ch = rec(depth + 1)
        return (parts[depth], (ch,) * N)

    return StochVector(family, h, N, flatten(rec(0)))


def lift_path_at(family: StageFamily, h: int, alpha: Sequence[int],
                 v: Sequence[int], N: int) -> StochVector:
    """v's blocks placed along the scenario path alpha, zeros elsewhere."""
    alpha = tuple(alpha)
    _check_alpha(alpha, h, N, full=True)
    w = family.widths(h)
    parts = _split_path(v, w)

    def rec(depth, on_path):
        block = parts[depth] if on_path else (0,) * w[depth]
        if depth == h:
            return (block, ())
        return (block, tuple(rec(depth + 1, on_path and alpha[depth] == i)
                             for i in range(1, N + 1)))

    return StochVector(family, h, N, flatten(rec(0, True)))
