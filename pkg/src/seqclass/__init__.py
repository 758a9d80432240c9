"""Minimum-expected-cost sequential classification.

Build question-ordering trees for a set of binary patterns with prior
probabilities and per-question costs: exactly (dynamic programming) or by
the entropy, signature, and hybrid heuristics; benchmark the heuristics
against the optimum; consult interactively over HTTP.
"""

__version__ = "0.1.0"

from .exact import DP_MAX_ROWS, enumerate_all_trees, solve_dp
from .heuristics import (
    ENTROPY_RULES,
    POSTERIOR_PER_COST,
    REDUCTION_PER_COST,
    HeuristicChoice,
    Signature,
    best_signature,
    build_entropy_tree,
    build_hybrid_tree,
    build_signature,
    build_signature_tree,
    entropy_pick,
    signature_pick,
)
from .model import (
    ColumnSplit,
    Problem,
    ProblemFormatError,
    SurvivorSet,
    ValidationReport,
    coefficient_of_variation,
    dump_problem,
    entropy,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    split,
    validate,
)
from .tree import (
    ClassTree,
    Inspect,
    InvalidTreeError,
    Leaf,
    dump_tree,
    expected_cost,
    expected_cost_recursive,
    load_tree,
    path_columns,
    tree_from_dict,
    tree_to_dict,
    tree_weight,
    verify,
)

__all__ = [
    "__version__",
    "DP_MAX_ROWS",
    "ENTROPY_RULES",
    "POSTERIOR_PER_COST",
    "REDUCTION_PER_COST",
    "ClassTree",
    "ColumnSplit",
    "HeuristicChoice",
    "Inspect",
    "InvalidTreeError",
    "Leaf",
    "Problem",
    "ProblemFormatError",
    "Signature",
    "SurvivorSet",
    "ValidationReport",
    "best_signature",
    "build_entropy_tree",
    "build_hybrid_tree",
    "build_signature",
    "build_signature_tree",
    "coefficient_of_variation",
    "dump_problem",
    "dump_tree",
    "entropy",
    "entropy_pick",
    "enumerate_all_trees",
    "expected_cost",
    "expected_cost_recursive",
    "load_problem",
    "load_tree",
    "path_columns",
    "problem_from_dict",
    "problem_to_dict",
    "signature_pick",
    "solve_dp",
    "split",
    "tree_from_dict",
    "tree_to_dict",
    "tree_weight",
    "validate",
    "verify",
]
