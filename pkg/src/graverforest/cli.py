"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 parse or usage error,
3 infeasible (no integral solution), 4 infeasible (no nonnegative solution),
5 library/family digest mismatch, 6 check failure, 7 unbounded.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import formats
from .blocks import building_blocks, compute_blocks
from .graver import graver_basis
from .intlin import DimensionError
from .solver import (INFEASIBLE_LINEAR, INFEASIBLE_NONNEGATIVE, MODES, OPTIMAL,
                     UNBOUNDED, LibraryMismatch, ProblemInstance, solve)
from .stochastic import build_a, dims, nest
from .vtree import constructible_nested, expand_members

log = logging.getLogger("graverforest")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE_LINEAR = 3
EXIT_INFEASIBLE_NONNEG = 4
EXIT_DIGEST = 5
EXIT_CHECK = 6
EXIT_UNBOUNDED = 7

_STATUS_EXIT = {
    OPTIMAL: EXIT_OK,
    INFEASIBLE_LINEAR: EXIT_INFEASIBLE_LINEAR,
    INFEASIBLE_NONNEGATIVE: EXIT_INFEASIBLE_NONNEG,
    UNBOUNDED: EXIT_UNBOUNDED,
}


class UsageError(ValueError):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _load_library(args, family):
    return formats.parse_library(_read(args.library), family)


def cmd_graver(args):
    A = formats.parse_matrix(_read(args.matrix))
    G = graver_basis(A, raw=args.raw, engine=args.engine)
    _write(args.out, formats.format_graver(G.elements, len(A[0])))
    print(f"{len(G)} elements", file=sys.stderr)
    return EXIT_OK


def cmd_matrix(args):
    family = formats.parse_family(_read(args.family))
    if not 0 <= args.stage <= family.k:
        raise UsageError(f"stage {args.stage} outside 0..{family.k}")
    A = build_a(family, args.stage, args.N)
    _write(args.out, formats.format_matrix(A))
    return EXIT_OK


def cmd_blocks(args):
    family = formats.parse_family(_read(args.family))

    def progress(i, steps, queued, size):
        if steps % 1000 == 0:
            print(f"level {i}: {steps} candidates, {queued} queued, {size} trees",
                  file=sys.stderr)

    lib = compute_blocks(family, prune=args.prune, on_step=progress if args.verbose else None)
    _write(args.out, formats.format_library(lib))
    for i, level in enumerate(lib.levels):
        print(f"level {i}: {len(level)} trees")
    bb = building_blocks(lib)
    for depth, labels in enumerate(bb.per_height):
        shown = " ".join("[" + ",".join(map(str, v)) + "]" for v in sorted(labels))
        print(f"depth {depth}: {len(labels)} labels {shown}".rstrip())
    return EXIT_OK


def cmd_solve(args):
    family = formats.parse_family(_read(args.family))
    lib = _load_library(args, family)
    b = formats.parse_vector(_read(args.rhs))
    c = formats.parse_cost(_read(args.cost))
    inst = ProblemInstance(family, args.N, b, c)
    out = solve(inst, lib, mode=args.mode)
    print(f"status: {out.status}")
    if out.status == OPTIMAL:
        print(f"objective: {out.objective}")
        _write(args.out, formats.format_vector(out.solution))
    return _STATUS_EXIT[out.status]


def _check_one(job):
    family, top, N = job
    k = family.k
    G = graver_basis(build_a(family, k, N))
    w = family.widths(k)
    used = set()
    for v in G:
        node = nest(v, w, N)
        hit = next((i for i, T in enumerate(top) if constructible_nested(node, T)), None)
        if hit is None:
            return N, len(G), len(used), v
        used.add(hit)
    return N, len(G), len(used), None


def cmd_check(args):
    family = formats.parse_family(_read(args.family))
    lib = _load_library(args, family)
    jobs = [(family, lib.top(), N) for N in args.N]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_check_one, jobs))
    else:
        results = [_check_one(j) for j in jobs]
    print(f"{'N':>3} {'dim':>5} {'graver':>7} {'trees used':>10}  result")
    failed = None
    for N, size, used, bad in results:
        d = dims(family, family.k, N)[1]
        print(f"{N:>3} {d:>5} {size:>7} {used:>10}  {'ok' if bad is None else 'MISSING'}")
        if bad is not None and failed is None:
            failed = (N, bad)
    if failed is not None:
        N, v = failed
        print(f"not constructible (N={N}): {' '.join(map(str, v))}")
        return EXIT_CHECK
    return EXIT_OK


def cmd_expand(args):
    k, l, digest, levels = formats.read_library_levels(_read(args.library))
    i = k if args.level is None else args.level
    if not 0 <= i <= k:
        raise UsageError(f"level {i} outside 0..{k}")
    members = set()
    for T in levels[i]:
        members.update(expand_members(T, args.N))
    for v in sorted(members):
        sys.stdout.write(" ".join(map(str, v)) + "\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="graverforest",
                                description="Graver bases and building blocks for multi-stage stochastic IPs")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graver", help="Graver basis of a matrix")
    g.add_argument("--matrix", required=True)
    g.add_argument("--out", default="-")
    g.add_argument("--raw", action="store_true", help="skip the final minimization")
    g.add_argument("--engine", choices=("lift", "fifo"), default="lift")
    g.set_defaults(func=cmd_graver)

    m = sub.add_parser("matrix", help="write A_{s,N} for a family")
    m.add_argument("--family", required=True)
    m.add_argument("--stage", type=int, required=True)
    m.add_argument("-N", type=_positive, required=True)
    m.add_argument("--out", default="-")
    m.set_defaults(func=cmd_matrix)

    b = sub.add_parser("blocks", help="compute the block library of a family")
    b.add_argument("--family", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--prune", action="store_true",
                   help="drop trees reduced by another tree of the same level (not covered by the correctness argument)")
    b.set_defaults(func=cmd_blocks)

    s = sub.add_parser("solve", help="solve an instance with a block library")
    s.add_argument("--family", required=True)
    s.add_argument("--library", required=True)
    s.add_argument("-N", type=_positive, required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--cost", required=True)
    s.add_argument("--out", default="-")
    s.add_argument("--mode", choices=MODES, default="exhaustive")
    s.add_argument("--jobs", type=_positive, default=1,
                   help="accepted for symmetry with check; solving runs in one process")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="verify Graver bases are constructible from the library")
    c.add_argument("--family", required=True)
    c.add_argument("--library", required=True)
    c.add_argument("-N", type=_positive, nargs="+", required=True)
    c.add_argument("--jobs", type=_positive, default=1)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("expand", help="list the members of <G_i>_N")
    e.add_argument("--library", required=True)
    e.add_argument("-N", type=_positive, required=True)
    e.add_argument("--level", type=int)
    e.set_defaults(func=cmd_expand)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except LibraryMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIGEST
    except (formats.ParseError, DimensionError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as e:  # noqa: BLE001 - surface anything else as internal
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
