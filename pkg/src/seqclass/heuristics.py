"""Entropy, signature and hybrid tree builders.

Three ways to pick the next column for a survivor set:

- entropy: the most informative column per unit cost;
- signature: guess the most promising row, then probe the weakest link in
  its cheapest distinguishing column set;
- hybrid: try both picks at every node, keep the cheaper subtree.

All builders produce complete, correct classification trees; they differ
only in expected cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .model import Problem, SurvivorSet
from .tree import ClassTree, Inspect, Leaf

REDUCTION_PER_COST = "reduction-per-cost"
POSTERIOR_PER_COST = "posterior-per-cost"
ENTROPY_RULES = (REDUCTION_PER_COST, POSTERIOR_PER_COST)


@dataclass(frozen=True)
class Signature:
    """Columns whose joint values in `row` occur in no other surviving row."""

    row: int
    columns: tuple[int, ...]
    total_cost: float


@dataclass(frozen=True)
class HeuristicChoice:
    method: str
    column: int
    score: float
    row: int | None = None


def _check_rule(rule: str) -> bool:
    if rule not in ENTROPY_RULES:
        raise ValueError(f"unknown entropy rule {rule!r}")
    return rule == REDUCTION_PER_COST


def _require_pending(survivors: SurvivorSet) -> None:
    if survivors.mask.bit_count() < 2:
        raise ValueError("survivor set must contain at least two rows")


def entropy_pick(
    problem: Problem, survivors: SurvivorSet, rule: str = REDUCTION_PER_COST
) -> HeuristicChoice:
    """Best next column by expected entropy change per unit cost."""
    maximize = _check_rule(rule)
    _require_pending(survivors)
    kern = kernels.get(problem.n_rows, problem.n_cols)
    col, score = kern.entropy_pick(
        problem.column_masks,
        problem.priors,
        problem.costs,
        survivors.mask,
        problem.n_rows,
        maximize,
    )
    if col < 0:
        raise ValueError("no informative column for the survivor set")
    return HeuristicChoice("entropy", col, score)


def build_signature(
    problem: Problem, survivors: SurvivorSet, row: int, seed: int
) -> Signature:
    """Greedy signature for `row` grown from one seed column."""
    _require_pending(survivors)
    if row not in survivors:
        raise ValueError(f"row {row} is not in the survivor set")
    s1 = survivors.mask & problem.column_masks[seed]
    if s1 == 0 or s1 == survivors.mask:
        raise ValueError(f"seed column {seed} is not informative here")
    kern = kernels.get(problem.n_rows, problem.n_cols)
    cols, total = kern.signature_grow(
        problem.column_masks,
        problem.priors,
        problem.costs,
        survivors.mask,
        problem.n_rows,
        row,
        seed,
    )
    return Signature(row, tuple(cols), total)


def best_signature(problem: Problem, survivors: SurvivorSet, row: int) -> Signature:
    """Cheapest greedy signature for `row` over all informative seeds."""
    _require_pending(survivors)
    if row not in survivors:
        raise ValueError(f"row {row} is not in the survivor set")
    kern = kernels.get(problem.n_rows, problem.n_cols)
    cols, total = kern.signature_best(
        problem.column_masks,
        problem.priors,
        problem.costs,
        survivors.mask,
        problem.n_rows,
        row,
    )
    if cols is None:
        raise ValueError("no informative column for the survivor set")
    return Signature(row, tuple(cols), total)


def signature_pick(
    problem: Problem, survivors: SurvivorSet, observed: dict[int, bool] | None = None
) -> HeuristicChoice:
    """Guess-and-verify choice of the next column.

    `observed` is accepted for interface symmetry with live sessions; the
    columns answered so far are constant within the survivor set, hence
    never part of a signature, so it does not change the result.
    """
    _require_pending(survivors)
    kern = kernels.get(problem.n_rows, problem.n_cols)
    col, ratio, row = kern.signature_pick(
        problem.column_masks,
        problem.priors,
        problem.costs,
        survivors.mask,
        problem.n_rows,
    )
    if col < 0:
        raise ValueError("no informative column for the survivor set")
    return HeuristicChoice("signature", col, ratio, row)

def tree_from_choices(problem: Problem, choices, smask: int) -> ClassTree:
    """Materialize a tree from a {survivor set: column} policy table."""
    if smask & (smask - 1) == 0:
        return Leaf(problem.labels[smask.bit_length() - 1])
    j = choices[smask]
    one = smask & problem.column_masks[j]
    zero = smask & ~problem.column_masks[j]
    return Inspect(
        j, tree_from_choices(problem, choices, zero), tree_from_choices(problem, choices, one)
    )


def build_entropy_tree(problem: Problem, rule: str = REDUCTION_PER_COST) -> ClassTree:
    """Complete tree grown by applying the entropy rule at every node."""
    maximize = _check_rule(rule)
    kern = kernels.get(problem.n_rows, problem.n_cols)
    choices = kern.entropy_tree_table(
        problem.column_masks,
        problem.priors,
        problem.costs,
        problem.full_mask,
        problem.n_rows,
        maximize,
    )
    return tree_from_choices(problem, choices, problem.full_mask)


def build_signature_tree(problem: Problem) -> ClassTree:
    """Complete tree grown by the guess-and-verify rule at every node.

    Signatures are recomputed against each node's survivor submatrix, so
    already-answered columns (constant there) drop out automatically.
    """
    kern = kernels.get(problem.n_rows, problem.n_cols)
    choices = kern.signature_tree_table(
        problem.column_masks,
        problem.priors,
        problem.costs,
        problem.full_mask,
        problem.n_rows,
    )
    return tree_from_choices(problem, choices, problem.full_mask)


def build_hybrid_tree(problem: Problem, rule: str = REDUCTION_PER_COST) -> ClassTree:
    """At every node expand both the entropy and the signature candidate and
    keep the subtree with the lower conditional expected cost.

    Results are memoized by survivor set, so shared subproblems are built
    once. Cost ties go to the entropy candidate.
    """
    maximize = _check_rule(rule)
    kern = kernels.get(problem.n_rows, problem.n_cols)
    _, choices = kern.hybrid_table(
        problem.column_masks,
        problem.priors,
        problem.costs,
        problem.full_mask,
        problem.n_rows,
        maximize,
    )
    return tree_from_choices(problem, choices, problem.full_mask)
