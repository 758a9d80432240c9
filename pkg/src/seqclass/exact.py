"""Exact minimum-expected-cost solver.

solve_dp runs the survivor-set dynamic program (memoized on bitmasks) and
rebuilds the optimal tree from the table. enumerate_all_trees and
iter_all_trees are deliberately naive oracles for tiny instances: the same
recursion without memoization, and an explicit generator of every valid
tree. They stay independent of the solver so tests can compare the two.
"""

from __future__ import annotations

from typing import Iterator

from . import kernels
from .model import Problem
from .tree import ClassTree, Inspect, Leaf

# Memo size grows with the number of reachable survivor sets; beyond ~24
# rows both memory and time stop being reasonable.
DP_MAX_ROWS = 24

ORACLE_MAX_ROWS = 5
ORACLE_MAX_COLS = 5


def solve_dp(problem: Problem) -> tuple[ClassTree, float]:
    """Optimal classification tree and its expected cost.

    Ties between equally good columns go to the lowest index, so the
    output is deterministic.
    """
    if problem.n_rows > DP_MAX_ROWS:
        raise ValueError(
            f"exact solver is capped at {DP_MAX_ROWS} rows, got {problem.n_rows}"
        )
    kern = kernels.get(problem.n_rows, problem.n_cols)
    cost, choices = kern.dp_table(
        problem.column_masks, problem.priors, problem.costs, problem.full_mask
    )
    return _rebuild(problem, choices, problem.full_mask), cost


def _rebuild(problem: Problem, choices, smask: int) -> ClassTree:
    if smask & (smask - 1) == 0:
        return Leaf(problem.labels[smask.bit_length() - 1])
    j = choices[smask]
    one = smask & problem.column_masks[j]
    zero = smask & ~problem.column_masks[j]
    return Inspect(j, _rebuild(problem, choices, zero), _rebuild(problem, choices, one))


def _oracle_guard(problem: Problem) -> None:
    if problem.n_rows > ORACLE_MAX_ROWS or problem.n_cols > ORACLE_MAX_COLS:
        raise ValueError(
            f"oracle is capped at {ORACLE_MAX_ROWS}x{ORACLE_MAX_COLS}, "
            f"got {problem.n_rows}x{problem.n_cols}"
        )


def enumerate_all_trees(problem: Problem) -> float:
    """True minimum expected cost by unmemoized recursion over every
    informative column at every survivor set. Test oracle only."""
    _oracle_guard(problem)
    masks = problem.column_masks
    priors = problem.priors
    costs = problem.costs
    n = problem.n_cols

    def rec(s: int) -> float:
        if s & (s - 1) == 0:
            return 0.0
        ps = 0.0
        m = s
        while m:
            ps += priors[(m & -m).bit_length() - 1]
            m &= m - 1
        best = float("inf")
        for j in range(n):
            s1 = s & masks[j]
            if s1 == 0 or s1 == s:
                continue
            u0 = rec(s & ~masks[j])
            u1 = rec(s1)
            u = ps * costs[j] + u0 + u1
            if u < best:
                best = u
        return best

    return rec(problem.full_mask)


def iter_all_trees(problem: Problem) -> Iterator[ClassTree]:
    """Every valid tree whose splits are all informative. Test oracle only."""
    _oracle_guard(problem)
    masks = problem.column_masks

    def rec(s: int) -> Iterator[ClassTree]:
        if s & (s - 1) == 0:
            yield Leaf(problem.labels[s.bit_length() - 1])
            return
        for j in range(problem.n_cols):
            s1 = s & masks[j]
            if s1 == 0 or s1 == s:
                continue
            for lo in rec(s & ~masks[j]):
                for hi in rec(s1):
                    yield Inspect(j, lo, hi)

    return rec(problem.full_mask)
