"""Set covering, rephrased as an equal-cost classification problem.

A cover question "is there a cover of size <= k?" maps to a classification
problem with one row per universe element plus an all-zeros row whose prior
dominates. Deciding the cover question then amounts to solving the
classification problem exactly and counting the columns on the dominant
row's path. brute_force_cover is the independent oracle.

The decision procedure runs its own dynamic program in exact integer
arithmetic (priors share the denominator (m-1)(n+1) and costs are 1), with
lexicographic tie-breaking that minimizes the dominant row's path length
among cost-optimal trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .model import Problem, ProblemFormatError

BRUTE_FORCE_MAX_SUBSETS = 20


class DegenerateReductionError(ValueError):
    """Two rows of the reduced matrix coincide, so classes are ambiguous."""


@dataclass(frozen=True)
class SetCoverInstance:
    universe: tuple
    subsets: tuple[frozenset, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "subsets", tuple(frozenset(s) for s in self.subsets))
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("universe elements must be distinct")
        if not self.subsets:
            raise ValueError("the subset family must not be empty")
        allowed = set(self.universe)
        for i, s in enumerate(self.subsets):
            stray = s - allowed
            if stray:
                raise ValueError(f"subset {i} has elements outside the universe: {sorted(stray)!r}")
        if self.k < 0:
            raise ValueError("k must be non-negative")


@dataclass(frozen=True)
class CoverDecision:
    covered: bool
    witness: tuple[int, ...] | None
    dominant_path: tuple[int, ...]
    optimal_cost: Fraction


def reduce_to_problem(instance: SetCoverInstance) -> Problem:
    """Build the classification problem for a cover instance.

    Rows: one membership pattern per element (in universe order) plus an
    all-zeros row. Element priors are 1/((m-1)(n+1)); the all-zeros row
    gets n/(n+1); costs are all 1. Raises DegenerateReductionError if two
    rows coincide (identical membership patterns, or an element belonging
    to no subset, which collides with the all-zeros row).
    """
    n = len(instance.subsets)
    elements = instance.universe
    m = len(elements) + 1
    rows = []
    for e in elements:
        rows.append(tuple(1 if e in s else 0 for s in instance.subsets))
    rows.append(tuple(0 for _ in range(n)))
    seen: dict[tuple[int, ...], int] = {}
    names = [f"el:{e}" for e in elements] + ["none"]
    for i, row in enumerate(rows):
        if row in seen:
            first = seen[row]
            raise DegenerateReductionError(
                f"reduction degenerate: rows for {names[first]} and {names[i]} coincide"
            )
        seen[row] = i
    if m == 1:
        priors: tuple[float, ...] = (1.0,)
    else:
        element_prior = 1.0 / ((m - 1) * (n + 1))
        priors = tuple([element_prior] * (m - 1) + [n / (n + 1)])
    return Problem(
        labels=tuple(names),
        matrix=tuple(rows),
        priors=priors,
        costs=tuple(1.0 for _ in range(n)),
    )


def _exact_masks(instance: SetCoverInstance) -> tuple[list[int], list[int], int]:
    """Column masks, integer priors, and the scale for the integer DP."""
    n = len(instance.subsets)
    m = len(instance.universe) + 1
    masks = []
    for s in instance.subsets:
        mask = 0
        for i, e in enumerate(instance.universe):
            if e in s:
                mask |= 1 << i
        masks.append(mask)
    pint = [1] * (m - 1) + [n * (m - 1)]
    scale = (m - 1) * (n + 1)
    return masks, pint, scale


def _lex_dp(masks: list[int], pint: list[int], dominant: int, root: int):
    """Integer DP minimizing (expected cost, dominant row's path length).

    Returns {state: (scaled cost, dominant depth, best column)}.
    """
    n = len(masks)
    dom_bit = 1 << dominant
    memo: dict[int, tuple[int, int, int]] = {}

    def rec(s: int) -> tuple[int, int]:
        got = memo.get(s)
        if got is not None:
            return got[0], got[1]
        if s & (s - 1) == 0:
            memo[s] = (0, 0, -1)
            return 0, 0
        ps = 0
        m = s
        while m:
            ps += pint[(m & -m).bit_length() - 1]
            m &= m - 1
        best: tuple[int, int] = (1 << 62, 1 << 62)
        best_j = -1
        for j in range(n):
            s1 = s & masks[j]
            if s1 == 0 or s1 == s:
                continue
            s0 = s & ~masks[j]
            u0, d0 = rec(s0)
            u1, d1 = rec(s1)
            u = ps + u0 + u1
            if s & dom_bit:
                depth = 1 + (d1 if s1 & dom_bit else d0)
            else:
                depth = 0
            cand = (u, depth)
            if cand < best:
                best = cand
                best_j = j
        memo[s] = (best[0], best[1], best_j)
        return best

    rec(root)
    return memo


def decide_cover(instance: SetCoverInstance) -> CoverDecision:
    """Answer the cover question through the classification reduction.

    Solves the reduced problem exactly (integer arithmetic, ties broken
    toward shorter dominant paths), reads off the columns inspected on the
    all-zeros row's path, and compares their count with k. A yes answer
    always carries a verified cover witness.
    """
    reduce_to_problem(instance)  # surfaces degeneracy before solving
    if not instance.universe:
        return CoverDecision(True, (), (), Fraction(0))
    masks, pint, scale = _exact_masks(instance)
    dominant = len(instance.universe)
    root = (1 << (dominant + 1)) - 1
    memo = _lex_dp(masks, pint, dominant, root)

    path = []
    s = root
    dom_bit = 1 << dominant
    while s & (s - 1):
        j = memo[s][2]
        path.append(j)
        s1 = s & masks[j]
        s = s1 if s1 & dom_bit else s & ~masks[j]
    path_t = tuple(path)
    cost = Fraction(memo[root][0], scale)

    covered = len(path_t) <= instance.k
    witness: tuple[int, ...] | None = None
    if covered:
        union = set()
        for j in path_t:
            union |= instance.subsets[j]
        if union != set(instance.universe):
            raise AssertionError("dominant path does not induce a cover")
        witness = path_t
    return CoverDecision(covered, witness, path_t, cost)


def appendix_bounds(instance: SetCoverInstance, decision: CoverDecision) -> tuple[int, int, int]:
    """Scaled-integer bound chain around the optimal cost.

    Returns (lower, scaled optimal cost, upper); the chain is
    lower < cost <= upper whenever the universe is non-empty.
    """
    n = len(instance.subsets)
    m = len(instance.universe) + 1
    scale = (m - 1) * (n + 1)
    v = decision.optimal_cost * scale
    assert v.denominator == 1
    e_m = len(decision.dominant_path)
    lower = n * (m - 1) * e_m
    upper = n * (m - 1) * e_m + (m - 1) * n
    return lower, int(v), upper


def brute_force_cover(instance: SetCoverInstance) -> int | None:
    """Smallest cover cardinality by exhaustive search; None if no cover."""
    n = len(instance.subsets)
    if n > BRUTE_FORCE_MAX_SUBSETS:
        raise ValueError(f"brute force capped at {BRUTE_FORCE_MAX_SUBSETS} subsets")
    target = set(instance.universe)
    if not target:
        return 0
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            union = set()
            for j in combo:
                union |= instance.subsets[j]
            if union == target:
                return size
    return None


def set_cover_from_dict(data: object) -> SetCoverInstance:
    if not isinstance(data, dict):
        raise ProblemFormatError("set-cover body must be a JSON object")
    missing = [k for k in ("universe", "subsets", "k") if k not in data]
    if missing:
        raise ProblemFormatError(f"missing fields: {', '.join(missing)}")
    universe = data["universe"]
    subsets = data["subsets"]
    k = data["k"]
    if not isinstance(universe, list):
        raise ProblemFormatError("universe must be a list")
    if not isinstance(subsets, list) or not all(isinstance(s, list) for s in subsets):
        raise ProblemFormatError("subsets must be a list of lists")
    if type(k) is not int:
        raise ProblemFormatError("k must be an integer")
    try:
        return SetCoverInstance(tuple(universe), tuple(frozenset(s) for s in subsets), k)
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def load_set_cover(path) -> SetCoverInstance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return set_cover_from_dict(data)
