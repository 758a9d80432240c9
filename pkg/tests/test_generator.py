import math

import numpy as np
import pytest

from seqclass.generator import (
    CV_BINS,
    ENTROPY_BINS,
    GenerationError,
    GridCellSpec,
    cv_bin_bounds,
    entropy_bin_bounds,
    gen_costs,
    gen_matrix,
    gen_priors,
    gen_problem,
    grid_cells,
    write_problem_set,
)
from seqclass.model import coefficient_of_variation, entropy, load_problem, validate


def rng_for(seed=0):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


class TestBinBounds:
    def test_entropy_bins_partition(self):
        for rows in (2, 4, 10, 16):
            edges = [entropy_bin_bounds(rows, b) for b in range(ENTROPY_BINS)]
            assert edges[0][0] == 0.0
            assert edges[-1][1] == pytest.approx(math.log2(rows), abs=1e-12)
            for (a, b), (c, d) in zip(edges, edges[1:]):
                assert b == pytest.approx(c, abs=1e-12)

    def test_cv_bins_partition(self):
        edges = [cv_bin_bounds(b) for b in range(CV_BINS)]
        assert edges[0][0] == 0.0
        assert edges[-1][1] == 1.0

    def test_ten_row_top_bin_matches_published_range(self):
        lo, hi = entropy_bin_bounds(10, 4)
        assert lo == pytest.approx(2.657, abs=1e-2)
        assert hi == pytest.approx(3.322, abs=1e-3)


class TestGenMatrix:
    def test_reproducible_and_clean(self):
        a = gen_matrix(4, 4, rng_for(5))
        b = gen_matrix(4, 4, rng_for(5))
        assert a == b
        assert len(set(a)) == 4
        for j in range(4):
            column = {row[j] for row in a}
            assert column == {0, 1}

    def test_full_cube(self):
        matrix = gen_matrix(16, 4, rng_for(1))
        assert sorted(matrix) == sorted(
            tuple(c >> j & 1 for j in range(4)) for c in range(16)
        )

    def test_too_many_rows(self):
        with pytest.raises(GenerationError):
            gen_matrix(5, 2, rng_for(0))


class TestGenPriors:
    def test_top_bin_near_uniform_possible(self):
        p = gen_priors(10, 4, rng_for(2))
        lo, hi = entropy_bin_bounds(10, 4)
        assert lo <= entropy(p) <= hi

    def test_bottom_bin_is_spiked(self):
        p = gen_priors(10, 0, rng_for(3))
        assert entropy(p) < entropy_bin_bounds(10, 0)[1]
        assert max(p) >= 0.9

    def test_every_bin_feasible_for_two_rows(self):
        for b in range(ENTROPY_BINS):
            p = gen_priors(2, b, rng_for(b))
            lo, hi = entropy_bin_bounds(2, b)
            closed = b == ENTROPY_BINS - 1
            assert lo <= entropy(p) <= hi if closed else lo <= entropy(p) < hi

    def test_sums_to_one(self):
        for b in range(ENTROPY_BINS):
            p = gen_priors(6, b, rng_for(10 + b))
            assert sum(p) == pytest.approx(1.0, abs=1e-9)


class TestGenCosts:
    def test_low_bin_near_constant(self):
        c = gen_costs(10, 0, rng_for(4))
        assert coefficient_of_variation(c) < 0.1

    def test_high_bin_skewed(self):
        c = gen_costs(10, 9, rng_for(5))
        assert 0.9 <= coefficient_of_variation(c) <= 1.0

    def test_positive_and_mean_one(self):
        for b in range(CV_BINS):
            c = gen_costs(8, b, rng_for(20 + b))
            assert all(x > 0 for x in c)
            assert sum(c) / len(c) == pytest.approx(1.0, abs=1e-9)


class TestGenProblem:
    def test_deterministic(self):
        spec = GridCellSpec(6, 6, 2, 3, 5, 99)
        assert gen_problem(spec, 3) == gen_problem(spec, 3)
        assert gen_problem(spec, 3) != gen_problem(spec, 4)

    def test_cell_properties(self):
        spec = GridCellSpec(5, 5, 0, 0, 10, 7)
        for i in range(10):
            problem = gen_problem(spec, i)
            report = validate(problem)
            assert report.valid
            assert report.warnings == ()
            assert entropy(problem.priors) < entropy_bin_bounds(5, 0)[1]
            assert coefficient_of_variation(problem.costs) < 0.1

    def test_full_grid_counts(self):
        cells = grid_cells(4, 4, 50, 0)
        assert len(cells) == ENTROPY_BINS * CV_BINS
        assert sum(c.per_cell for c in cells) == 2500

    def test_labels(self):
        problem = gen_problem(GridCellSpec(4, 4, 1, 1, 1, 0), 0)
        assert problem.labels == ("C1", "C2", "C3", "C4")


class TestWriteProblemSet:
    def test_manifest_and_files(self, tmp_path):
        manifest = write_problem_set(
            str(tmp_path), rows=4, cols=4, per_cell=2, seed=11,
            entropy_bins=[1], cv_bins=[0, 5],
        )
        assert len(manifest["problems"]) == 4
        for entry in manifest["problems"]:
            problem = load_problem(tmp_path / entry["file"])
            assert validate(problem).valid
            assert entropy(problem.priors) == pytest.approx(entry["prior_entropy"])
            lo, hi = entropy_bin_bounds(4, entry["entropy_bin"])
            assert lo <= entry["prior_entropy"] <= hi

    def test_byte_identical_reruns(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        write_problem_set(str(a_dir), 4, 4, 1, 3, entropy_bins=[0], cv_bins=[0])
        write_problem_set(str(b_dir), 4, 4, 1, 3, entropy_bins=[0], cv_bins=[0])
        for name in ("manifest.json", "problem_e0_c0_000.json"):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()
