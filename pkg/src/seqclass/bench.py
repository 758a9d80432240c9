"""Benchmark harness: heuristics vs the exact optimum over the grid.

For every generated problem the exact solver provides the baseline; each
requested method's tree is costed and its relative error recorded. Errors
are aggregated per grid cell (mean over problems, plus median/max and a
mean solve time). Timing numbers are advisory; the error columns are
deterministic for a fixed seed.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, kernels
from .exact import solve_dp
from .generator import (
    CV_BINS,
    ENTROPY_BINS,
    RNG_NAME,
    GridCellSpec,
    gen_problem,
)
from .heuristics import (
    REDUCTION_PER_COST,
    build_entropy_tree,
    build_hybrid_tree,
    build_signature_tree,
)
from .model import Problem
from .tree import expected_cost, verify

METHODS = ("dp", "entropy", "signature", "hybrid")


def relative_error(heuristic_cost: float, optimal_cost: float) -> float:
    """Percentage above the optimum, clamped at zero for float dust."""
    if optimal_cost <= 0:
        raise ValueError(f"optimal cost must be positive, got {optimal_cost}")
    if heuristic_cost < optimal_cost - 1e-9:
        raise ValueError(
            f"heuristic cost {heuristic_cost} is below the optimum {optimal_cost}"
        )
    return max(0.0, 100.0 * (heuristic_cost - optimal_cost) / optimal_cost)


@dataclass(frozen=True)
class CellResult:
    method: str
    entropy_bin: int
    cv_bin: int
    n_problems: int
    mean_rel_err_pct: float
    median_rel_err_pct: float
    max_rel_err_pct: float
    mean_time_ms: float


@dataclass(frozen=True)
class BenchGrid:
    rows: int
    cols: int
    per_cell: int
    seed: int
    entropy_rule: str
    methods: tuple[str, ...]
    cells: tuple[CellResult, ...]

    def cell(self, method: str, entropy_bin: int, cv_bin: int) -> CellResult:
        for c in self.cells:
            if (c.method, c.entropy_bin, c.cv_bin) == (method, entropy_bin, cv_bin):
                return c
        raise KeyError((method, entropy_bin, cv_bin))

    def method_mean(self, method: str, entropy_bins=None) -> float:
        """Mean cell error for a method, optionally restricted to entropy bins."""
        values = [
            c.mean_rel_err_pct
            for c in self.cells
            if c.method == method
            and (entropy_bins is None or c.entropy_bin in entropy_bins)
        ]
        if not values:
            raise KeyError(method)
        return sum(values) / len(values)

    def manifest(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "per_cell": self.per_cell,
            "seed": self.seed,
            "entropy_rule": self.entropy_rule,
            "methods": list(self.methods),
            "rng": RNG_NAME,
            "numpy_version": np.__version__,
            "code_version": __version__,
            "kernel_backend": kernels.backend_name(),
        }


def _build_tree(method: str, problem: Problem, entropy_rule: str):
    if method == "dp":
        return solve_dp(problem)[0]
    if method == "entropy":
        return build_entropy_tree(problem, rule=entropy_rule)
    if method == "signature":
        return build_signature_tree(problem)
    if method == "hybrid":
        return build_hybrid_tree(problem, rule=entropy_rule)
    raise ValueError(f"unknown method {method!r}")


def _solve_one(task) -> tuple[int, int, int, dict]:
    """Worker: solve one generated problem with every requested method."""
    rows, cols, per_cell, seed, eb, cb, index, methods, entropy_rule = task
    spec = GridCellSpec(rows, cols, eb, cb, per_cell, seed)
    problem = gen_problem(spec, index)
    t0 = time.perf_counter()
    opt_tree, opt_cost = solve_dp(problem)
    dp_ms = (time.perf_counter() - t0) * 1000.0
    ok, bad = verify(opt_tree, problem)
    if not ok:
        raise AssertionError(f"optimal tree failed verification at row {bad}")
    out: dict[str, tuple[float, float]] = {}
    for method in methods:
        if method == "dp":
            out["dp"] = (0.0, dp_ms)
            continue
        t0 = time.perf_counter()
        tree = _build_tree(method, problem, entropy_rule)
        ms = (time.perf_counter() - t0) * 1000.0
        ok, bad = verify(tree, problem)
        if not ok:
            raise AssertionError(f"{method} tree failed verification at row {bad}")
        out[method] = (relative_error(expected_cost(tree, problem), opt_cost), ms)
    return eb, cb, index, out


def run_grid(
    rows: int,
    cols: int,
    per_cell: int,
    seed: int,
    methods: tuple[str, ...] = ("entropy", "signature", "hybrid"),
    entropy_rule: str = REDUCTION_PER_COST,
    jobs: int = 1,
) -> BenchGrid:
    """Evaluate every cell of the 5x10 grid. Deterministic for a seed
    (timings aside); problems are independent, so jobs > 1 just parallelizes."""
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    tasks = [
        (rows, cols, per_cell, seed, eb, cb, i, tuple(methods), entropy_rule)
        for eb in range(ENTROPY_BINS)
        for cb in range(CV_BINS)
        for i in range(per_cell)
    ]
    # one warm-up solve per method so first-call overhead stays out of timings
    _solve_one(tasks[0])

    if jobs > 1:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            results = pool.map(_solve_one, tasks, chunksize=8)
    else:
        results = [_solve_one(t) for t in tasks]

    by_cell: dict[tuple[int, int], dict[int, dict]] = {}
    for eb, cb, index, out in results:
        by_cell.setdefault((eb, cb), {})[index] = out

    cells: list[CellResult] = []
    for eb in range(ENTROPY_BINS):
        for cb in range(CV_BINS):
            per_index = by_cell[(eb, cb)]
            for method in methods:
                errs = [per_index[i][method][0] for i in sorted(per_index)]
                times = [per_index[i][method][1] for i in sorted(per_index)]
                cells.append(
                    CellResult(
                        method=method,
                        entropy_bin=eb,
                        cv_bin=cb,
                        n_problems=len(errs),
                        mean_rel_err_pct=sum(errs) / len(errs),
                        median_rel_err_pct=float(np.median(errs)),
                        max_rel_err_pct=max(errs),
                        mean_time_ms=sum(times) / len(times),
                    )
                )
    return BenchGrid(
        rows=rows,
        cols=cols,
        per_cell=per_cell,
        seed=seed,
        entropy_rule=entropy_rule,
        methods=tuple(methods),
        cells=tuple(cells),
    )


CSV_HEADER = [
    "method",
    "entropy_bin",
    "cv_bin",
    "n_problems",
    "mean_rel_err_pct",
    "median",
    "max",
    "mean_time_ms",
]


def grid_to_csv(grid: BenchGrid) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_HEADER)
    for c in grid.cells:
        writer.writerow(
            [
                c.method,
                c.entropy_bin,
                c.cv_bin,
                c.n_problems,
                repr(c.mean_rel_err_pct),
                repr(c.median_rel_err_pct),
                repr(c.max_rel_err_pct),
                repr(c.mean_time_ms),
            ]
        )
    return buf.getvalue()


def cells_from_csv(text: str) -> tuple[CellResult, ...]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    cells = []
    for row in reader:
        cells.append(
            CellResult(
                method=row[0],
                entropy_bin=int(row[1]),
                cv_bin=int(row[2]),
                n_problems=int(row[3]),
                mean_rel_err_pct=float(row[4]),
                median_rel_err_pct=float(row[5]),
                max_rel_err_pct=float(row[6]),
                mean_time_ms=float(row[7]),
            )
        )
    return tuple(cells)


def _format_table(grid: BenchGrid, method: str, markdown: bool) -> str:
    lines = []
    cv_labels = [f"{cb / 10:.1f}-{(cb + 1) / 10:.1f}" for cb in range(CV_BINS)]
    title = f"Mean relative error (%) for the {method} method, {grid.rows}x{grid.cols} problems"
    if markdown:
        lines.append(f"### {title}")
        lines.append("")
        lines.append("| entropy bin | " + " | ".join(cv_labels) + " |")
        lines.append("|---" * (CV_BINS + 1) + "|")
    else:
        lines.append(title)
        lines.append("entropy bin".ljust(14) + "".join(x.rjust(9) for x in cv_labels))
    import math as _math

    width = _math.log2(grid.rows) / ENTROPY_BINS
    for eb in range(ENTROPY_BINS):
        label = f"{eb * width:.2f}-{(eb + 1) * width:.2f}"
        vals = [grid.cell(method, eb, cb).mean_rel_err_pct for cb in range(CV_BINS)]
        if markdown:
            lines.append(
                f"| {label} | " + " | ".join(f"{v:.2f}" for v in vals) + " |"
            )
        else:
            lines.append(label.ljust(14) + "".join(f"{v:9.2f}" for v in vals))
    lines.append("")
    return "\n".join(lines)


def emit_report(grid: BenchGrid, fmt: str = "text") -> str:
    """Render the grid: csv (machine), text or markdown (one table per method)."""
    if fmt == "csv":
        return grid_to_csv(grid)
    if fmt in ("text", "markdown"):
        if not grid.cells:
            return "empty benchmark grid\n"
        parts = [_format_table(grid, m, fmt == "markdown") for m in grid.methods]
        return "\n".join(parts)
    if fmt == "json":
        return json.dumps(
            {"manifest": grid.manifest(), "cells": [asdict(c) for c in grid.cells]},
            indent=2,
        )
    raise ValueError(f"unknown report format {fmt!r}")


def measure_scaling(
    sizes: tuple[int, ...] = (4, 6, 8, 10, 12, 14, 16),
    per_size: int = 3,
    seed: int = 0,
    methods: tuple[str, ...] = METHODS,
    repeats: int = 3,
    entropy_rule: str = REDUCTION_PER_COST,
) -> list[dict]:
    """Solve-time scaling for square problems: one row per (size, method).

    Each instance is timed as the best of `repeats` runs after a warm-up,
    then averaged across instances of the size.
    """
    out = []
    for size in sizes:
        problems = [
            gen_problem(GridCellSpec(size, size, 2, 4, per_size, seed), i)
            for i in range(per_size)
        ]
        for method in methods:
            _build_tree(method, problems[0], entropy_rule)  # warm-up
            per_instance = []
            for problem in problems:
                best = float("inf")
                for _ in range(repeats):
                    t0 = time.perf_counter()
                    _build_tree(method, problem, entropy_rule)
                    best = min(best, time.perf_counter() - t0)
                per_instance.append(best * 1000.0)
            out.append(
                {
                    "size": size,
                    "method": method,
                    "mean_ms": sum(per_instance) / len(per_instance),
                }
            )
    return out
