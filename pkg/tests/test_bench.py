import pytest

from seqclass.bench import (
    BenchGrid,
    cells_from_csv,
    emit_report,
    grid_to_csv,
    measure_scaling,
    relative_error,
    run_grid,
)


class TestRelativeError:
    def test_optimum_achieved(self):
        assert relative_error(2.9, 2.9) == 0.0

    def test_worked_posterior_tree(self):
        assert relative_error(5.0, 2.9) == pytest.approx(72.41, abs=0.01)

    def test_identity(self):
        for x in (0.3, 1.0, 17.5):
            assert relative_error(x, x) == 0.0

    def test_float_dust_clamped(self):
        assert relative_error(1.0 - 1e-12, 1.0) == 0.0

    def test_rejects_nonpositive_optimum(self):
        with pytest.raises(ValueError):
            relative_error(1.0, 0.0)

    def test_rejects_beating_the_optimum(self):
        with pytest.raises(ValueError):
            relative_error(0.5, 1.0)


@pytest.fixture(scope="module")
def small_grid() -> BenchGrid:
    return run_grid(4, 4, 2, seed=5, methods=("dp", "entropy", "signature", "hybrid"))


class TestRunGrid:
    def test_shape(self, small_grid):
        assert len(small_grid.cells) == 5 * 10 * 4
        assert {c.n_problems for c in small_grid.cells} == {2}

    def test_dp_errors_are_zero(self, small_grid):
        for c in small_grid.cells:
            if c.method == "dp":
                assert c.mean_rel_err_pct == 0.0

    def test_dominance(self, small_grid):
        for eb in range(5):
            for cb in range(10):
                hybrid = small_grid.cell("hybrid", eb, cb).mean_rel_err_pct
                ent = small_grid.cell("entropy", eb, cb).mean_rel_err_pct
                sig = small_grid.cell("signature", eb, cb).mean_rel_err_pct
                assert hybrid <= min(ent, sig) + 1e-9

    def test_deterministic_errors(self, small_grid):
        again = run_grid(4, 4, 2, seed=5, methods=("dp", "entropy", "signature", "hybrid"))
        for a, b in zip(small_grid.cells, again.cells):
            assert a.method == b.method
            assert a.mean_rel_err_pct == b.mean_rel_err_pct
            assert a.median_rel_err_pct == b.median_rel_err_pct
            assert a.max_rel_err_pct == b.max_rel_err_pct

    def test_jobs_do_not_change_results(self, small_grid):
        parallel = run_grid(4, 4, 2, seed=5,
                            methods=("dp", "entropy", "signature", "hybrid"), jobs=2)
        for a, b in zip(small_grid.cells, parallel.cells):
            assert a.mean_rel_err_pct == b.mean_rel_err_pct

    def test_single_method(self):
        grid = run_grid(4, 4, 1, seed=1, methods=("hybrid",))
        assert {c.method for c in grid.cells} == {"hybrid"}

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            run_grid(4, 4, 1, seed=1, methods=("magic",))


class TestReports:
    def test_csv_round_trip(self, small_grid):
        text = grid_to_csv(small_grid)
        assert cells_from_csv(text) == small_grid.cells

    def test_text_tables(self, small_grid):
        text = emit_report(small_grid, "text")
        for method in ("dp", "entropy", "signature", "hybrid"):
            assert method in text
        assert "0.9-1.0" in text

    def test_markdown_tables(self, small_grid):
        text = emit_report(small_grid, "markdown")
        assert text.count("###") == 4

    def test_unknown_format(self, small_grid):
        with pytest.raises(ValueError):
            emit_report(small_grid, "yaml")

    def test_manifest_fields(self, small_grid):
        m = small_grid.manifest()
        assert m["seed"] == 5
        assert m["rng"].startswith("numpy Philox")
        assert m["kernel_backend"] in ("native", "pure")


class TestScaling:
    def test_report_rows(self):
        rows = measure_scaling(sizes=(4, 6), per_size=1, seed=0,
                               methods=("dp", "entropy"), repeats=1)
        assert {r["size"] for r in rows} == {4, 6}
        assert all(r["mean_ms"] >= 0 for r in rows)
