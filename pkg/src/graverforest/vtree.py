"""Vector-trees: balanced labeled trees encoding sets of path vectors.

Every ``VectorTree`` is kept tight and canonical: children of a node carry
pairwise distinct labels and are sorted by label. Two trees are therefore
equal exactly when their path sets are equal. Labels are int tuples; a tree
of height h has its root labeled in Z^{n_h} and its leaves in Z^{n_0}.
"""
from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Optional, Sequence

from .intlin import DimensionError, IntVec, add as vadd, sign_leq
from .stochastic import Nested, StageFamily, StochVector, flatten


class VectorTree:
    """A balanced labeled tree.

    The constructor canonicalizes by default: children sharing a label are
    merged and the rest sorted by label. ``tight=False`` keeps the children
    exactly as given (sorted, for a stable structural identity), which is
    needed to talk about non-tight trees at all.
    """

    __slots__ = ("label", "children", "height", "tight", "_hash", "_key")

    def __init__(self, label: Sequence[int], children: Iterable["VectorTree"] = (),
                 tight: bool = True):
        self.label = tuple(label)
        children = tuple(children)
        if children:
            h = children[0].height
            if any(c.height != h for c in children):
                raise ValueError("unbalanced vector-tree")
            if tight:
                children = _canonical_children(children)
            else:
                children = tuple(sorted(children, key=lambda c: c.key))
            self.height = h + 1
        else:
            self.height = 0
        self.children = children
        self.tight = all(c.tight for c in children) and (
            len({c.label for c in children}) == len(children))
        self._hash = hash((self.label, children))
        self._key = None

    @classmethod
    def _raw(cls, label, children, height):
        # children already canonical
        t = cls.__new__(cls)
        t.label = label
        t.children = children
        t.height = height
        t.tight = True
        t._hash = hash((label, children))
        t._key = None
        return t

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VectorTree) or self._hash != other._hash:
            return False
        return self.label == other.label and self.children == other.children

    @property
    def root(self) -> IntVec:
        return self.label

    @property
    def key(self):
        """Total-order key; sorting trees by it gives the canonical order."""
        if self._key is None:
            self._key = (self.label, tuple(c.key for c in self.children))
        return self._key

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"VectorTree({serialize(self)})"

    def __str__(self):
        return serialize(self)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def path_count(self) -> int:
        if not self.children:
            return 1
        return sum(c.path_count() for c in self.children)


def _canonical_children(children):
    groups = {}
    for c in children:
        groups.setdefault(c.label, []).append(c)
    out = []
    for label in sorted(groups):
        g = groups[label]
        if len(g) == 1:
            out.append(g[0] if g[0].tight else tighten(g[0]))
        elif g[0].height == 0:
            out.append(g[0])
        else:
            out.append(VectorTree(label, [gc for c in g for gc in c.children]))
    return tuple(out)


def tighten(T: VectorTree) -> VectorTree:
    """The tight tree with the same path set."""
    if T.tight:
        return T
    return VectorTree(T.label, T.children)


def merge(trees: Sequence[VectorTree]) -> VectorTree:
    """Tight tree of the union of path sets of trees sharing one root label."""
    if not trees:
        raise ValueError("nothing to merge")
    if len({t.label for t in trees}) != 1:
        raise ValueError("merged trees need a common root")
    if len(trees) == 1:
        return trees[0]
    return VectorTree(trees[0].label, [c for t in trees for c in t.children])


def _split(v: Sequence[int], widths: Sequence[int]) -> list:
    if len(v) != sum(widths):
        raise DimensionError(f"path of length {len(v)}, widths {tuple(widths)}")
    parts, off = [], 0
    for w in widths:
        parts.append(tuple(v[off:off + w]))
        off += w
    return parts


def chain(v: Sequence[int], widths: Sequence[int]) -> VectorTree:
    """The tree whose only path is v."""
    parts = _split(v, widths)
    t = VectorTree._raw(parts[-1], (), 0)
    for h, p in enumerate(reversed(parts[:-1]), 1):
        t = VectorTree._raw(p, (t,), h)
    return t


def tight_from_paths(S: Iterable[Sequence[int]], widths: Sequence[int]) -> VectorTree:
    """The unique tight tree with path set S (all paths share the root block)."""
    split = sorted({tuple(_split(v, widths)) for v in S})
    if not split:
        raise ValueError("empty path set")
    if len({p[0] for p in split}) != 1:
        raise ValueError("paths disagree on the root block")

    def build(group, depth):
        label = group[0][depth]
        if depth == len(widths) - 1:
            return VectorTree._raw(label, (), 0)
        kids = []
        for _, sub in itertools.groupby(group, key=lambda p: p[depth + 1]):
            kids.append(build(list(sub), depth + 1))
        return VectorTree._raw(label, tuple(kids), len(widths) - 1 - depth)

    return build(split, 0)


def iter_paths(T: VectorTree) -> Iterator[IntVec]:
    if not T.children:
        yield T.label
        return
    for c in T.children:
        for p in iter_paths(c):
            yield T.label + p


def paths(T: VectorTree) -> set:
    return set(iter_paths(T))


def widths_of(T: VectorTree) -> tuple:
    out = []
    t = T
    while True:
        out.append(len(t.label))
        if not t.children:
            return tuple(out)
        t = t.children[0]


def from_nested(node: Nested) -> VectorTree:
    """The tight vector-tree T(z) of a nested scenario vector."""
    block, kids = node
    if not kids:
        return VectorTree._raw(tuple(block), (), 0)
    return VectorTree(block, [from_nested(k) for k in kids])


def tree_of(z: StochVector) -> VectorTree:
    return from_nested(z.nested())


def value_of(T: VectorTree, family: StageFamily) -> Optional[IntVec]:
    """Common value of all paths, or None when paths evaluate differently."""
    if T.height > family.k:
        raise DimensionError("tree higher than the family")
    memo = {}

    def rec(t, h):
        key = id(t)
        if key in memo:
            return memo[key]
        stage = family.stages[h]
        if len(t.label) != len(stage[0]):
            raise DimensionError(f"label width {len(t.label)} != n_{h}")
        own = tuple(sum(a * x for a, x in zip(row, t.label)) for row in stage)
        if not t.children:
            res = own
        else:
            vals = {rec(c, h - 1) for c in t.children}
            if len(vals) != 1 or None in vals:
                res = None
            else:
                res = vadd(own, vals.pop())
        memo[key] = res
        return res

    return rec(T, T.height)


def negate(T: VectorTree) -> VectorTree:
    return VectorTree(tuple(-x for x in T.label), [negate(c) for c in T.children])


def _check_compatible(S, T):
    if S.height != T.height:
        raise DimensionError(f"heights differ: {S.height} != {T.height}")
    if len(S.label) != len(T.label):
        raise DimensionError("label widths differ")


def add(S: VectorTree, T: VectorTree) -> VectorTree:
    """Tight tree of the Minkowski sum of the path sets."""
    _check_compatible(S, T)
    memo = {}

    def rec(a, b):
        key = (id(a), id(b))
        if key in memo:
            return memo[key]
        label = tuple(x + y for x, y in zip(a.label, b.label))
        if not a.children:
            res = VectorTree._raw(label, (), 0)
        elif a.height == 1:
            leaves = {tuple(p + q for p, q in zip(x.label, y.label))
                      for x in a.children for y in b.children}
            res = _with_leaves(label, leaves)
        else:
            res = VectorTree(label, [rec(x, y) for x in a.children for y in b.children])
        memo[key] = res
        return res

    return rec(S, T)


def _with_leaves(label, leaves):
    kids = tuple(VectorTree._raw(v, (), 0) for v in sorted(leaves))
    return VectorTree._raw(label, kids, 1)


def _below(a, b):
    # sign_leq without the length check; tree recursions compare equal widths
    for x, y in zip(a, b):
        if x and (x * y < 0 or abs(x) > abs(y)):
            return False
    return True


def reduces(S: VectorTree, T: VectorTree) -> bool:
    """Decide S ⊑_h T (S reduces T)."""
    _check_compatible(S, T)
    memo = {}

    def rec(a, b):
        key = (id(a), id(b))
        if key in memo:
            return memo[key]
        res = _below(a.label, b.label) and all(
            any(rec(x, y) for x in a.children) for y in b.children)
        memo[key] = res
        return res

    return rec(S, T)


def _subtract(S, T):
    memo = {}

    def rec(a, b):
        key = (id(a), id(b))
        if key in memo:
            return memo[key]
        res = None
        if _below(b.label, a.label):
            label = tuple(x - y for x, y in zip(a.label, b.label))
            if not a.children:
                res = VectorTree._raw(label, (), 0)
            elif a.height == 1:
                leaves = {tuple(p - q for p, q in zip(x.label, y.label))
                          for x in a.children for y in b.children if _below(y.label, x.label)}
                if leaves:
                    res = _with_leaves(label, leaves)
            else:
                kids = [r for x in a.children for y in b.children
                        if (r := rec(x, y)) is not None]
                if kids:
                    res = VectorTree(label, kids)
        memo[key] = res
        return res

    return rec(S, T)


def subtract(S: VectorTree, T: VectorTree) -> VectorTree:
    """Tight tree of {v - w : v in paths(S), w in paths(T), w ⊑ v}.

    Only defined when T ⊑_h S; anything else raises ValueError.
    """
    _check_compatible(S, T)
    if not reduces(T, S):
        raise ValueError("subtract requires the subtrahend to reduce the minuend")
    out = _subtract(S, T)
    assert out is not None
    return out


def paths_leq(S: VectorTree, T: VectorTree) -> bool:
    """Every path of T lies ⊑-above some path of S (a weaker, rejected order)."""
    ps = list(iter_paths(S))
    return all(any(sign_leq(v, w) for v in ps) for w in iter_paths(T))


def _members(T: VectorTree, N: int) -> Iterator[Nested]:
    if not T.children:
        yield (T.label, ())
        return
    options = [m for c in T.children for m in _members(c, N)]
    for pick in itertools.product(options, repeat=N):
        yield (T.label, pick)


def expand_members(T: VectorTree, N: int) -> Iterator[IntVec]:
    """Enumerate the constructible set of T for N scenarios (flat layout)."""
    if N < 1:
        raise ValueError("N must be positive")
    # constructibility only sees the path set, so expand the tight form
    for m in _members(tighten(T), N):
        yield flatten(m)


def constructible_nested(node: Nested, T: VectorTree) -> bool:
    if tuple(node[0]) != T.label:
        return False
    if not T.children:
        return not node[1]
    by_label = {c.label: c for c in T.children}
    for ch in node[1]:
        sub = by_label.get(tuple(ch[0]))
        if sub is None or not constructible_nested(ch, sub):
            return False
    return True


def is_constructible(z, T: VectorTree) -> bool:
    """Whether every path of z is a path of T."""
    if isinstance(z, StochVector):
        if z.height != T.height:
            raise DimensionError("height mismatch")
        z = z.nested()
    return constructible_nested(z, tighten(T))


def reduces_at_n(S: VectorTree, T: VectorTree, N: int) -> bool:
    """Exhaustive check that every member of <T>_N lies above a member of <S>_N."""
    _check_compatible(S, T)
    small = list(expand_members(S, N))
    return all(any(sign_leq(y, z) for y in small) for z in expand_members(T, N))


def tree_normal_form(S: VectorTree, G: Iterable[VectorTree]) -> VectorTree:
    """Reduce S by members of G with nonzero root until none applies.

    Reducers are scanned in canonical order and the scan restarts after each
    subtraction. Reducers with zero root are never used: subtracting them
    need not shrink anything, so the loop could otherwise run forever.
    """
    reducers = [T for T in sorted(G, key=lambda t: t.key) if any(T.label)]
    for T in reducers:
        _check_compatible(S, T)
    while True:
        for T in reducers:
            if sign_leq(T.label, S.label) and reduces(T, S):
                before = sum(abs(x) for x in S.label)
                S = _subtract(S, T)
                assert sum(abs(x) for x in S.label) < before
                break
        else:
            return S


_TOKEN = re.compile(r"\s*(?:(\()|(\))|\[([^\]]*)\])")


def serialize(T: VectorTree) -> str:
    inner = "[" + ",".join(str(x) for x in T.label) + "]"
    if T.children:
        inner += " " + " ".join(serialize(c) for c in T.children)
    return "(" + inner + ")"


def parse_tree(text: str, tight: bool = True) -> VectorTree:
    """Parse ``(label tree*)`` with labels written ``[int,int,...]``.

    With ``tight=False`` repeated child labels are kept instead of merged.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad tree syntax at offset {pos}: {text[pos:pos + 20]!r}")
        if m.group(1):
            tokens.append("(")
        elif m.group(2):
            tokens.append(")")
        else:
            body = m.group(3).strip()
            if not body:
                raise ValueError("empty label")
            tokens.append(tuple(int(x) for x in body.split(",")))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    return _parse_tokens(tokens, tight)


def _parse_tokens(tokens, tight) -> VectorTree:
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "(":
            raise ValueError("expected '('")
        pos += 1
        if pos >= len(tokens) or not isinstance(tokens[pos], tuple):
            raise ValueError("expected a label after '('")
        label = tokens[pos]
        pos += 1
        kids = []
        while pos < len(tokens) and tokens[pos] == "(":
            kids.append(node())
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("expected ')'")
        pos += 1
        return VectorTree(label, kids, tight=tight)

    t = node()
    if pos != len(tokens):
        raise ValueError("trailing tokens after tree")
    return t
