"""Plain-text file formats: matrices, vectors, costs, families, Graver sets, libraries."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Sequence

from .blocks import BlockLibrary
from .intlin import IntMatrix, IntVec
from .solver import LibraryMismatch
from .stochastic import StageFamily
from .vtree import parse_tree, serialize, widths_of

LIB_MAGIC = "GRAVER-FOREST-LIB v1"

_INT = re.compile(r"[+-]?\d+\Z")
_RAT = re.compile(r"([+-]?\d+)/(\d+)\Z")


class ParseError(ValueError):
    pass


def _lines(text: str) -> List[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def _ints(line: str, count=None, what="line") -> list:
    toks = line.split()
    if any(not _INT.match(t) for t in toks):
        raise ParseError(f"non-integer token in {what}: {line!r}")
    if count is not None and len(toks) != count:
        raise ParseError(f"{what}: expected {count} integers, got {len(toks)}")
    return [int(t) for t in toks]


def _header(lines, n, what):
    if not lines:
        raise ParseError(f"empty {what} file")
    return _ints(lines[0], n, f"{what} header")


def _rows(lines, start, count, width, what):
    if len(lines) < start + count:
        raise ParseError(f"{what}: expected {count} rows, found {len(lines) - start}")
    return tuple(tuple(_ints(lines[start + i], width, what)) for i in range(count))


# -- matrices and vectors

def format_matrix(A: IntMatrix) -> str:
    rows = len(A)
    cols = len(A[0]) if rows else 0
    out = [f"{rows} {cols}"] + [" ".join(map(str, r)) for r in A]
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> IntMatrix:
    lines = _lines(text)
    rows, cols = _header(lines, 2, "matrix")
    if rows < 1 or cols < 1:
        raise ParseError("matrix needs at least one row and one column")
    A = _rows(lines, 1, rows, cols, "matrix")
    if len(lines) != rows + 1:
        raise ParseError("trailing data after matrix")
    return A


def format_vector(v: Sequence[int]) -> str:
    return f"{len(v)}\n{' '.join(map(str, v))}\n"


def parse_vector(text: str) -> IntVec:
    lines = _lines(text)
    (dim,) = _header(lines, 1, "vector")
    if dim < 0:
        raise ParseError("negative vector dimension")
    toks = " ".join(lines[1:])
    return tuple(_ints(toks, dim, "vector"))


def parse_cost(text: str) -> tuple:
    lines = _lines(text)
    (dim,) = _header(lines, 1, "cost")
    toks = " ".join(lines[1:]).split()
    if len(toks) != dim:
        raise ParseError(f"cost: expected {dim} entries, got {len(toks)}")
    out = []
    for t in toks:
        m = _RAT.match(t)
        if _INT.match(t):
            out.append(Fraction(int(t)))
        elif m and int(m.group(2)) != 0:
            out.append(Fraction(int(m.group(1)), int(m.group(2))))
        else:
            raise ParseError(f"bad cost entry {t!r}")
    return tuple(out)


def format_cost(c: Iterable) -> str:
    c = [Fraction(x) for x in c]
    return f"{len(c)}\n{' '.join(str(x) for x in c)}\n"


# -- Graver sets

def format_graver(elements: Sequence[IntVec], dim: int) -> str:
    out = [f"{len(elements)} {dim}"] + [" ".join(map(str, v)) for v in elements]
    return "\n".join(out) + "\n"


def parse_graver(text: str) -> list:
    lines = _lines(text)
    count, dim = _header(lines, 2, "graver")
    return list(_rows(lines, 1, count, dim, "graver"))


# -- stage families

def parse_family(text: str) -> StageFamily:
    lines = _lines(text)
    k, l = _header(lines, 2, "family")
    if k < 0 or l < 1:
        raise ParseError("family header needs k >= 0 and l >= 1")
    pos = 1
    stages = []
    for s in range(k + 1):
        if pos >= len(lines):
            raise ParseError(f"family: missing stage {s}")
        (n,) = _ints(lines[pos], 1, f"width of T_{s}")
        if n < 1:
            raise ParseError(f"T_{s} needs at least one column")
        stages.append(_rows(lines, pos + 1, l, n, f"T_{s}"))
        pos += 1 + l
    if pos != len(lines):
        raise ParseError("trailing data after family")
    return StageFamily(tuple(stages))


def format_family(family: StageFamily) -> str:
    return family.serialize()


# -- block libraries

def format_library(lib: BlockLibrary) -> str:
    fam = lib.family
    out = [LIB_MAGIC, f"{fam.k} {fam.l}", f"sha256 {fam.digest}"]
    for i, level in enumerate(lib.levels):
        out.append(f"level {i} count={len(level)}")
        out.extend(serialize(T) for T in level)
    return "\n".join(out) + "\n"


_LEVEL = re.compile(r"level (\d+) count=(\d+)\Z")


def read_library_levels(text: str):
    """(k, l, digest, levels) from a library file, without a family check."""
    lines = _lines(text)
    if not lines or lines[0] != LIB_MAGIC:
        raise ParseError("not a block library file")
    if len(lines) < 3:
        raise ParseError("truncated library header")
    k, l = _ints(lines[1], 2, "library header")
    parts = lines[2].split()
    if len(parts) != 2 or parts[0] != "sha256":
        raise ParseError("bad digest line")
    pos = 3
    levels = []
    for i in range(k + 1):
        m = _LEVEL.match(lines[pos]) if pos < len(lines) else None
        if not m or int(m.group(1)) != i:
            raise ParseError(f"expected header for level {i}")
        count = int(m.group(2))
        if pos + 1 + count > len(lines):
            raise ParseError(f"level {i}: truncated")
        trees = []
        for line in lines[pos + 1:pos + 1 + count]:
            try:
                T = parse_tree(line)
            except ValueError as e:
                raise ParseError(f"level {i}: {e}") from None
            if T.height != i:
                raise ParseError(f"level {i}: tree of height {T.height}")
            trees.append(T)
        levels.append(tuple(trees))
        pos += 1 + count
    if pos != len(lines):
        raise ParseError("trailing data after library")
    return k, l, parts[1], tuple(levels)


def parse_library(text: str, family: StageFamily) -> BlockLibrary:
    """Read a library file; ``family`` supplies the matrices it must belong to.

    A digest that does not match ``family`` raises ``LibraryMismatch``.
    """
    k, l, digest, levels = read_library_levels(text)
    if digest != family.digest or (k, l) != (family.k, family.l):
        raise LibraryMismatch("library digest does not match the family")
    for i, level in enumerate(levels):
        if any(widths_of(T) != family.widths(i) for T in level):
            raise ParseError(f"level {i}: tree shape does not fit the family")
    return BlockLibrary(family, levels)
