import itertools
import random

import pytest

from seqclass.exact import solve_dp
from seqclass.heuristics import (
    POSTERIOR_PER_COST,
    best_signature,
    build_entropy_tree,
    build_hybrid_tree,
    build_signature,
    build_signature_tree,
    entropy_pick,
    signature_pick,
)
from seqclass.model import Problem, SurvivorSet
from seqclass.tree import Inspect, expected_cost, verify

from .conftest import random_problem


def identity_uniform(n: int) -> Problem:
    matrix = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return Problem(
        labels=tuple(f"C{i + 1}" for i in range(n)),
        matrix=matrix,
        priors=tuple(1.0 / n for _ in range(n)),
        costs=tuple([1.0] * n),
    )


class TestEntropyPick:
    def test_worked_default_rule(self, worked_problem):
        choice = entropy_pick(worked_problem, SurvivorSet.full(worked_problem))
        assert choice.column == 1  # ties with column 4, lower index wins
        assert choice.score == pytest.approx((1.84644 - 0.96515) / 1.0, abs=1e-4)

    def test_worked_posterior_rule(self, worked_problem):
        choice = entropy_pick(
            worked_problem, SurvivorSet.full(worked_problem), rule=POSTERIOR_PER_COST
        )
        assert choice.column == 2
        assert choice.score == pytest.approx(0.8749 / 4.0, abs=1e-3)

    def test_identity_ties_to_first_column(self):
        problem = identity_uniform(4)
        choice = entropy_pick(problem, SurvivorSet.full(problem))
        assert choice.column == 0

    def test_rejects_singleton(self, worked_problem):
        with pytest.raises(ValueError):
            entropy_pick(worked_problem, SurvivorSet.of(worked_problem, [1]))

    def test_unknown_rule(self, worked_problem):
        with pytest.raises(ValueError):
            entropy_pick(worked_problem, SurvivorSet.full(worked_problem), rule="nope")

    def test_balanced_split_under_uniform(self):
        # uniform priors and costs: the pick has the most nearly even split
        rng = random.Random(21)
        for _ in range(60):
            base = random_problem(rng, max_rows=8, max_cols=6)
            problem = Problem(
                labels=base.labels,
                matrix=base.matrix,
                priors=tuple(1.0 / base.n_rows for _ in range(base.n_rows)),
                costs=tuple(1.0 for _ in range(base.n_cols)),
            )
            full = SurvivorSet.full(problem)
            choice = entropy_pick(problem, full)
            n = problem.n_rows

            def imbalance(j):
                ones = (full.mask & problem.column_masks[j]).bit_count()
                return abs(ones / n - 0.5)

            informative = [
                j
                for j in range(problem.n_cols)
                if 0 < (full.mask & problem.column_masks[j]).bit_count() < n
            ]
            best = min(imbalance(j) for j in informative)
            assert imbalance(choice.column) == pytest.approx(best, abs=1e-9)


class TestBuildEntropyTree:
    def test_worked_default(self, worked_problem):
        tree = build_entropy_tree(worked_problem)
        assert isinstance(tree, Inspect) and tree.column == 1
        assert expected_cost(tree, worked_problem) == pytest.approx(2.9, abs=1e-9)

    def test_worked_posterior(self, worked_problem):
        tree = build_entropy_tree(worked_problem, rule=POSTERIOR_PER_COST)
        assert isinstance(tree, Inspect) and tree.column == 2
        assert expected_cost(tree, worked_problem) == pytest.approx(5.0, abs=1e-9)

    def test_single_row(self):
        problem = Problem(labels=("x",), matrix=((1, 0),), priors=(1.0,), costs=(1, 1))
        tree = build_entropy_tree(problem)
        assert not isinstance(tree, Inspect)

    def test_rules_genuinely_diverge(self, worked_problem):
        a = expected_cost(build_entropy_tree(worked_problem), worked_problem)
        b = expected_cost(
            build_entropy_tree(worked_problem, rule=POSTERIOR_PER_COST), worked_problem
        )
        assert a != b


class TestBuildSignature:
    def test_row3_seed_col4(self, worked_problem):
        sig = build_signature(worked_problem, SurvivorSet.full(worked_problem), 2, 3)
        assert sig.columns == (3,)
        assert sig.total_cost == 1.0

    def test_row3_seed_col1(self, worked_problem):
        sig = build_signature(worked_problem, SurvivorSet.full(worked_problem), 2, 0)
        assert sig.columns == (0, 3)
        assert sig.total_cost == 4.0

    def test_two_row_any_seed_complete(self):
        problem = Problem(
            labels=("a", "b"), matrix=((0, 0), (1, 1)), priors=(0.5, 0.5), costs=(1, 2)
        )
        full = SurvivorSet.full(problem)
        for seed in (0, 1):
            sig = build_signature(problem, full, 0, seed)
            assert sig.columns == (seed,)

    def test_uninformative_seed_rejected(self, worked_problem):
        pair = SurvivorSet.of(worked_problem, [0, 1])
        with pytest.raises(ValueError, match="informative"):
            build_signature(worked_problem, pair, 0, 3)

    def test_signature_uniqueness_property(self):
        # the grown column set really does isolate the row among survivors
        rng = random.Random(22)
        for _ in range(80):
            problem = random_problem(rng, max_rows=8, max_cols=8)
            full = SurvivorSet.full(problem)
            row = rng.randrange(problem.n_rows)
            informative = [
                j
                for j in range(problem.n_cols)
                if 0 < (full.mask & problem.column_masks[j]).bit_count() < problem.n_rows
            ]
            seed = rng.choice(informative)
            sig = build_signature(problem, full, row, seed)
            pattern = tuple(problem.matrix[row][j] for j in sig.columns)
            matches = [
                i
                for i in range(problem.n_rows)
                if tuple(problem.matrix[i][j] for j in sig.columns) == pattern
            ]
            assert matches == [row]


class TestBestSignature:
    def test_row1(self, worked_problem):
        sig = best_signature(worked_problem, SurvivorSet.full(worked_problem), 0)
        assert sorted(sig.columns) == [1, 3]
        assert sig.total_cost == 2.0

    def test_row3(self, worked_problem):
        sig = best_signature(worked_problem, SurvivorSet.full(worked_problem), 2)
        assert sig.columns == (3,)
        assert sig.total_cost == 1.0

    def test_identity_row(self):
        problem = identity_uniform(3)
        sig = best_signature(problem, SurvivorSet.full(problem), 0)
        assert sig.columns == (0,)
        assert sig.total_cost == 1.0

    def test_greedy_at_least_brute_force(self):
        # the greedy signature costs no less than the true cheapest signature
        rng = random.Random(23)
        for _ in range(40):
            problem = random_problem(rng, max_rows=6, max_cols=8)
            full = SurvivorSet.full(problem)
            row = rng.randrange(problem.n_rows)
            sig = best_signature(problem, full, row)
            best = None
            cols = range(problem.n_cols)
            # scan every column subset: a cheaper set may be a larger one
            for r in range(1, problem.n_cols + 1):
                for combo in itertools.combinations(cols, r):
                    pattern = tuple(problem.matrix[row][j] for j in combo)
                    unique = all(
                        tuple(problem.matrix[i][j] for j in combo) != pattern
                        for i in range(problem.n_rows)
                        if i != row
                    )
                    if unique:
                        cost = sum(problem.costs[j] for j in combo)
                        best = cost if best is None else min(best, cost)
            assert best is not None
            assert sig.total_cost >= best - 1e-9


class TestSignaturePick:
    def test_worked_step2_step3(self, worked_problem):
        choice = signature_pick(worked_problem, SurvivorSet.full(worked_problem))
        assert choice.row == 2  # prior 0.3 over signature cost 1
        assert choice.column == 3
        assert choice.score == pytest.approx(0.3, abs=1e-9)

    def test_after_observing_col4(self, worked_problem):
        survivors = SurvivorSet.of(worked_problem, [0, 1, 3])
        choice = signature_pick(worked_problem, survivors, observed={3: True})
        assert choice.row == 0
        assert choice.column == 1
        assert choice.score == pytest.approx((0.4 / 0.7) / 1.0, abs=1e-9)

    def test_two_rows_cheapest_separator(self):
        problem = Problem(
            labels=("a", "b"),
            matrix=((0, 0, 1), (1, 1, 1)),
            priors=(0.5, 0.5),
            costs=(4, 2, 9),
        )
        choice = signature_pick(problem, SurvivorSet.full(problem))
        assert choice.column == 1


class TestBuildSignatureTree:
    def test_worked_trace(self, worked_problem):
        tree = build_signature_tree(worked_problem)
        assert isinstance(tree, Inspect) and tree.column == 3
        assert isinstance(tree.if_true, Inspect) and tree.if_true.column == 1
        assert expected_cost(tree, worked_problem) == pytest.approx(2.9, abs=1e-9)

    def test_single_row(self):
        problem = Problem(labels=("x",), matrix=((1,),), priors=(1.0,), costs=(1,))
        tree = build_signature_tree(problem)
        assert not isinstance(tree, Inspect)

    def test_reduced_instance_isolates_dominant_row_first(self):
        from seqclass.reduction import SetCoverInstance, reduce_to_problem

        instance = SetCoverInstance(
            (1, 2), (frozenset({1}), frozenset({2}), frozenset({1, 2})), 1
        )
        problem = reduce_to_problem(instance)
        tree = build_signature_tree(problem)
        assert isinstance(tree, Inspect) and tree.column == 2
        lo = tree.if_false
        assert not isinstance(lo, Inspect)  # the all-zeros row separates at once


class TestBuildHybridTree:
    def test_worked_problem(self, worked_problem):
        tree = build_hybrid_tree(worked_problem)
        assert expected_cost(tree, worked_problem) == pytest.approx(2.9, abs=1e-9)

    def test_dominates_both_heuristics(self):
        rng = random.Random(24)
        for _ in range(120):
            problem = random_problem(rng, max_rows=9, max_cols=9,
                                     zero_prior_chance=0.15)
            hybrid = expected_cost(build_hybrid_tree(problem), problem)
            ent = expected_cost(build_entropy_tree(problem), problem)
            sig = expected_cost(build_signature_tree(problem), problem)
            assert hybrid <= ent + 1e-9
            assert hybrid <= sig + 1e-9

    def test_dp_lower_bound_and_all_verify(self):
        rng = random.Random(25)
        for _ in range(120):
            problem = random_problem(rng, max_rows=9, max_cols=9,
                                     zero_prior_chance=0.15)
            _, opt = solve_dp(problem)
            for build in (build_entropy_tree, build_signature_tree, build_hybrid_tree):
                tree = build(problem)
                assert verify(tree, problem) == (True, None)
                assert expected_cost(tree, problem) >= opt - 1e-9

    def test_deterministic(self):
        rng = random.Random(26)
        for _ in range(30):
            problem = random_problem(rng)
            assert build_hybrid_tree(problem) == build_hybrid_tree(problem)
            assert build_entropy_tree(problem) == build_entropy_tree(problem)
            assert build_signature_tree(problem) == build_signature_tree(problem)
