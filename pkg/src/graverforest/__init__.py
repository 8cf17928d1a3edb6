"""Graver bases, vector-tree building blocks and a block-based solver for
multi-stage stochastic integer programs."""

from .blocks import BlockLibrary, building_blocks, compute_blocks
from .graver import GraverBasis, graver_basis
from .solver import ProblemInstance, SolveOutcome, most_expensive, solve
from .stochastic import StageFamily, StochVector, build_a, dims
from .vtree import VectorTree, parse_tree, serialize

__version__ = "0.1.0"
