import random

import pytest

from seqclass.model import Problem
from seqclass.tree import Inspect, Leaf


@pytest.fixture
def worked_problem() -> Problem:
    """The 4x4 running example used throughout the suite."""
    return Problem(
        labels=("C1", "C2", "C3", "C4"),
        matrix=((1, 0, 0, 1), (0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 1)),
        priors=(0.4, 0.2, 0.3, 0.1),
        costs=(3, 1, 4, 1),
    )


@pytest.fixture
def worked_tree():
    """An optimal tree for the running example: col2, then col4 / col3."""
    return Inspect(
        1,
        Inspect(3, Leaf("C3"), Leaf("C1")),
        Inspect(2, Leaf("C2"), Leaf("C4")),
    )


def random_problem(rng: random.Random, max_rows: int = 8, max_cols: int = 8,
                   min_rows: int = 2, zero_prior_chance: float = 0.0) -> Problem:
    """Random distinct-row problem; optionally zeroes one prior."""
    while True:
        rows = rng.randint(min_rows, max_rows)
        cols = rng.randint(1, max_cols)
        if rows <= 2**cols:
            break
    codes = rng.sample(range(2**cols), rows)
    matrix = tuple(tuple(c >> j & 1 for j in range(cols)) for c in codes)
    priors = [rng.random() for _ in range(rows)]
    if zero_prior_chance and rng.random() < zero_prior_chance and rows > 1:
        priors[rng.randrange(rows)] = 0.0
    total = sum(priors)
    priors = tuple(p / total for p in priors)
    costs = tuple(rng.uniform(0.1, 5.0) for _ in range(cols))
    labels = tuple(f"C{i + 1}" for i in range(rows))
    return Problem(labels=labels, matrix=matrix, priors=priors, costs=costs)


def random_valid_tree(rng: random.Random, problem: Problem):
    """A correct classification tree built by random informative splits."""

    def rec(smask: int):
        if smask & (smask - 1) == 0:
            return Leaf(problem.labels[smask.bit_length() - 1])
        candidates = []
        for j in range(problem.n_cols):
            s1 = smask & problem.column_masks[j]
            if s1 != 0 and s1 != smask:
                candidates.append(j)
        j = rng.choice(candidates)
        one = smask & problem.column_masks[j]
        zero = smask & ~problem.column_masks[j]
        return Inspect(j, rec(zero), rec(one))

    return rec(problem.full_mask)
