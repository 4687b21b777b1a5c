"""Exact interaction decompositions for projector families and split functors over finite posets."""

from .factor_spaces import ConfigurationSpace, Measure, build_family, interaction_decomposition, is_product
from .linalg import RatMatrix, Subspace
from .poset import FinitePoset, boolean_lattice, chain
from .projectors import NotDecomposable, ProjectorFamily, compute_s, decompose
from .split_functors import SplitFunctor, decompose_split, sum_of_components, validate_split

__all__ = [
    "ConfigurationSpace",
    "Measure",
    "build_family",
    "interaction_decomposition",
    "is_product",
    "RatMatrix",
    "Subspace",
    "FinitePoset",
    "boolean_lattice",
    "chain",
    "NotDecomposable",
    "ProjectorFamily",
    "compute_s",
    "decompose",
    "SplitFunctor",
    "decompose_split",
    "sum_of_components",
    "validate_split",
]
