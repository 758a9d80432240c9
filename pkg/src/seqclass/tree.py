"""Classification trees: representation, evaluation, verification.

An internal node names a column to inspect; its two children are the
subtrees for observing 0 and 1 there. Leaves carry class labels. Expected
cost is computed two ways: a direct path sum (the workhorse) and the
conditional-probability recursion (kept as a cross-check).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .model import Problem, ProblemFormatError


class InvalidTreeError(ValueError):
    """The tree does not classify the problem's rows correctly."""


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Inspect:
    column: int
    if_false: "ClassTree"
    if_true: "ClassTree"


ClassTree = Union[Leaf, Inspect]


def _trace(tree: ClassTree, problem: Problem, row: int) -> tuple[list[int], Leaf]:
    """Columns inspected (in order, possibly with repeats) and the leaf reached."""
    path: list[int] = []
    node = tree
    while isinstance(node, Inspect):
        if not 0 <= node.column < problem.n_cols:
            raise InvalidTreeError(f"column {node.column} out of range")
        path.append(node.column)
        node = node.if_true if problem.matrix[row][node.column] else node.if_false
    return path, node


def expected_cost(tree: ClassTree, problem: Problem) -> float:
    """Prior-weighted sum of each row's distinct inspection costs."""
    total = 0.0
    for i in range(problem.n_rows):
        path, leaf = _trace(tree, problem, i)
        if leaf.label != problem.labels[i]:
            raise InvalidTreeError(
                f"invalid tree: row {i} reaches leaf {leaf.label!r}, "
                f"expected {problem.labels[i]!r}"
            )
        total += problem.priors[i] * sum(problem.costs[j] for j in set(path))
    return total


def expected_cost_recursive(tree: ClassTree, problem: Problem) -> float:
    """Expected cost via the branch-weight recursion (cross-check route).

    A terminal node costs nothing; an internal node costs its inspection
    plus the probability-weighted costs of its children.
    """

    def rec(node: ClassTree, mask: int) -> float:
        if isinstance(node, Leaf):
            rows = [i for i in range(problem.n_rows) if mask >> i & 1]
            for i in rows:
                if problem.labels[i] != node.label:
                    raise InvalidTreeError(
                        f"invalid tree: row {i} reaches leaf {node.label!r}"
                    )
            return 0.0
        one = mask & problem.column_masks[node.column]
        zero = mask & ~problem.column_masks[node.column]
        pmass = _mass(problem, mask)
        if pmass > 0.0:
            w0 = _mass(problem, zero) / pmass
            w1 = _mass(problem, one) / pmass
        elif mask:
            w0 = zero.bit_count() / mask.bit_count()
            w1 = one.bit_count() / mask.bit_count()
        else:
            w0 = w1 = 0.0
        cost = problem.costs[node.column]
        if zero:
            cost += w0 * rec(node.if_false, zero)
        if one:
            cost += w1 * rec(node.if_true, one)
        return cost

    return rec(tree, problem.full_mask)


def _mass(problem: Problem, mask: int) -> float:
    total = 0.0
    while mask:
        total += problem.priors[(mask & -mask).bit_length() - 1]
        mask &= mask - 1
    return total


def tree_weight(tree: ClassTree, problem: Problem) -> float:
    """Sum over all nodes (internal and terminal) of the prior mass below.

    The mass of a node is the total prior probability of the rows whose
    paths pass through it.
    """

    def rec(node: ClassTree, mask: int) -> float:
        w = _mass(problem, mask)
        if isinstance(node, Leaf):
            return w
        one = mask & problem.column_masks[node.column]
        zero = mask & ~problem.column_masks[node.column]
        return w + rec(node.if_false, zero) + rec(node.if_true, one)

    return rec(tree, problem.full_mask)


def verify(tree: ClassTree, problem: Problem) -> tuple[bool, int | None]:
    """True iff every row reaches a leaf with its own label along a path
    that never repeats a column. On failure returns the first failing row."""
    for i in range(problem.n_rows):
        try:
            path, leaf = _trace(tree, problem, i)
        except InvalidTreeError:
            return False, i
        if len(set(path)) != len(path) or leaf.label != problem.labels[i]:
            return False, i
    return True, None


def path_columns(tree: ClassTree, problem: Problem, row: int) -> set[int]:
    """Distinct columns inspected before `row` reaches its leaf."""
    if not 0 <= row < problem.n_rows:
        raise ValueError(f"row {row} out of range")
    path, _ = _trace(tree, problem, row)
    return set(path)


def tree_to_dict(tree: ClassTree) -> dict:
    """Serialized form; columns are 1-based in the file format."""
    if isinstance(tree, Leaf):
        return {"class": tree.label}
    return {
        "inspect": tree.column + 1,
        "if_false": tree_to_dict(tree.if_false),
        "if_true": tree_to_dict(tree.if_true),
    }


def tree_from_dict(data: object) -> ClassTree:
    if not isinstance(data, dict):
        raise ProblemFormatError("tree node must be a JSON object")
    if "class" in data:
        label = data["class"]
        if not isinstance(label, str):
            raise ProblemFormatError("leaf class must be a string")
        return Leaf(label)
    if "inspect" in data:
        col = data["inspect"]
        if type(col) is not int or col < 1:
            raise ProblemFormatError(f"inspect must be a 1-based column, got {col!r}")
        if "if_false" not in data or "if_true" not in data:
            raise ProblemFormatError("inspect node needs if_false and if_true")
        return Inspect(col - 1, tree_from_dict(data["if_false"]), tree_from_dict(data["if_true"]))
    raise ProblemFormatError("tree node must have either 'class' or 'inspect'")


def load_tree(path) -> ClassTree:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return tree_from_dict(data)


def dump_tree(tree: ClassTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tree_to_dict(tree), fh, indent=2)
        fh.write("\n")
