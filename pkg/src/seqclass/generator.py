"""Seeded random problem generation, stratified into the benchmark grid.

Problems are binned by the entropy of their prior vector (5 equal bins
spanning [0, log2 L]) and by the coefficient of variation of their cost
vector (10 equal bins spanning [0, 1]). Every problem is a pure function
of (master seed, cell, index), via counter-based Philox streams, so grids
are reproducible.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .model import Problem, coefficient_of_variation, entropy

ENTROPY_BINS = 5
CV_BINS = 10
REJECTION_BUDGET = 100_000

RNG_NAME = "numpy Philox(SeedSequence(seed, spawn_key=(entropy_bin, cv_bin, index)))"


class GenerationError(RuntimeError):
    """A requested cell is infeasible or the rejection budget ran out."""


def entropy_bin_bounds(n_rows: int, entropy_bin: int) -> tuple[float, float]:
    """[lo, hi) bounds in bits; the top bin is closed at log2(n_rows)."""
    if not 0 <= entropy_bin < ENTROPY_BINS:
        raise ValueError(f"entropy bin must be in [0, {ENTROPY_BINS}), got {entropy_bin}")
    width = math.log2(n_rows) / ENTROPY_BINS
    return entropy_bin * width, (entropy_bin + 1) * width


def cv_bin_bounds(cv_bin: int) -> tuple[float, float]:
    """[lo, hi) bounds; the top bin is closed at 1.0."""
    if not 0 <= cv_bin < CV_BINS:
        raise ValueError(f"cv bin must be in [0, {CV_BINS}), got {cv_bin}")
    return cv_bin / 10.0, (cv_bin + 1) / 10.0


def _in_bin(value: float, lo: float, hi: float, closed_top: bool) -> bool:
    if closed_top:
        return lo <= value <= hi
    return lo <= value < hi


@dataclass(frozen=True)
class GridCellSpec:
    """One cell of the benchmark grid."""

    rows: int
    cols: int
    entropy_bin: int
    cv_bin: int
    per_cell: int
    seed: int

    def __post_init__(self) -> None:
        entropy_bin_bounds(max(self.rows, 2), self.entropy_bin)
        cv_bin_bounds(self.cv_bin)
        if self.rows < 2 or self.cols < 1:
            raise ValueError("grid cells need at least 2 rows and 1 column")
        if self.per_cell < 1:
            raise ValueError("per_cell must be positive")

    @property
    def entropy_bounds(self) -> tuple[float, float]:
        return entropy_bin_bounds(self.rows, self.entropy_bin)

    @property
    def cv_bounds(self) -> tuple[float, float]:
        return cv_bin_bounds(self.cv_bin)


def grid_cells(rows: int, cols: int, per_cell: int, seed: int) -> list[GridCellSpec]:
    """All 5x10 cells of the grid for one problem size."""
    return [
        GridCellSpec(rows, cols, eb, cb, per_cell, seed)
        for eb in range(ENTROPY_BINS)
        for cb in range(CV_BINS)
    ]


def _rng(seed: int, spawn_key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=spawn_key)))


def gen_matrix(rows: int, cols: int, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
    """Distinct uniform rows, resampled until no column is constant."""
    if rows > 2**cols:
        raise GenerationError(f"cannot place {rows} distinct rows in {{0,1}}^{cols}")
    space = 2**cols
    for _ in range(REJECTION_BUDGET):
        if space <= 1 << 20:
            codes = rng.choice(space, size=rows, replace=False)
        else:
            seen: set[int] = set()
            while len(seen) < rows:
                seen.add(int(rng.integers(space)))
            codes = np.array(sorted(seen))
            codes = rng.permutation(codes)
        codes = [int(c) for c in codes]
        constant = False
        for j in range(cols):
            ones = sum(c >> j & 1 for c in codes)
            if ones == 0 or ones == rows:
                constant = True
                break
        if not constant:
            return tuple(tuple(c >> j & 1 for j in range(cols)) for c in codes)
    raise GenerationError(f"no constant-free {rows}x{cols} matrix found within budget")


def gen_priors(rows: int, entropy_bin: int, rng: np.random.Generator) -> tuple[float, ...]:
    """Probability vector whose entropy lands in the requested bin.

    Samples a Dirichlet family with log-swept concentration, plus a spiked
    family (one dominant mass) that reaches the low bins quickly; rejects
    until the measured entropy fits.
    """
    lo, hi = entropy_bin_bounds(rows, entropy_bin)
    closed_top = entropy_bin == ENTROPY_BINS - 1
    if rows < 2:
        raise GenerationError("need at least 2 rows to target an entropy bin")
    for attempt in range(REJECTION_BUDGET):
        use_spike = entropy_bin <= 1 and attempt % 2 == 0
        if use_spike:
            eps = 10.0 ** rng.uniform(-9, math.log10(0.5))
            p = np.full(rows, eps / (rows - 1))
            p[int(rng.integers(rows))] = 1.0 - eps
        else:
            alpha = 10.0 ** rng.uniform(-2, 2)
            p = rng.dirichlet(np.full(rows, alpha))
        h = entropy(p.tolist())
        if _in_bin(h, lo, hi, closed_top):
            return tuple(float(x) for x in p)
    raise GenerationError(
        f"no prior vector with entropy in [{lo:.3f}, {hi:.3f}) found within budget"
    )


def gen_costs(cols: int, cv_bin: int, rng: np.random.Generator) -> tuple[float, ...]:
    """Positive costs with measured CV in the requested bin, mean 1."""
    lo, hi = cv_bin_bounds(cv_bin)
    closed_top = cv_bin == CV_BINS - 1
    for _ in range(REJECTION_BUDGET):
        target = rng.uniform(lo, hi)
        sigma = math.sqrt(math.log1p(target * target))
        c = rng.lognormal(mean=0.0, sigma=sigma, size=cols) if sigma > 0 else np.ones(cols)
        cv = coefficient_of_variation(c.tolist())
        if _in_bin(cv, lo, hi, closed_top):
            c = c / c.mean()
            return tuple(float(x) for x in c)
    raise GenerationError(
        f"no cost vector with CV in [{lo:.3f}, {hi:.3f}) found within budget"
    )


def gen_problem(spec: GridCellSpec, index: int) -> Problem:
    """Deterministic problem for (seed, cell, index)."""
    rng = _rng(spec.seed, (spec.entropy_bin, spec.cv_bin, index))
    matrix = gen_matrix(spec.rows, spec.cols, rng)
    priors = gen_priors(spec.rows, spec.entropy_bin, rng)
    costs = gen_costs(spec.cols, spec.cv_bin, rng)
    labels = tuple(f"C{i + 1}" for i in range(spec.rows))
    return Problem(labels=labels, matrix=matrix, priors=priors, costs=costs)


def gen_cell(spec: GridCellSpec) -> list[Problem]:
    return [gen_problem(spec, i) for i in range(spec.per_cell)]


def write_problem_set(
    out_dir: str,
    rows: int,
    cols: int,
    per_cell: int,
    seed: int,
    entropy_bins: list[int] | None = None,
    cv_bins: list[int] | None = None,
) -> dict:
    """Materialize problems plus a manifest; returns the manifest."""
    os.makedirs(out_dir, exist_ok=True)
    ebs = entropy_bins if entropy_bins is not None else list(range(ENTROPY_BINS))
    cbs = cv_bins if cv_bins is not None else list(range(CV_BINS))
    entries = []
    for eb in ebs:
        for cb in cbs:
            spec = GridCellSpec(rows, cols, eb, cb, per_cell, seed)
            for i in range(per_cell):
                problem = gen_problem(spec, i)
                name = f"problem_e{eb}_c{cb}_{i:03d}.json"
                with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
                    json.dump(
                        {
                            "labels": list(problem.labels),
                            "matrix": [list(r) for r in problem.matrix],
                            "p": list(problem.priors),
                            "c": list(problem.costs),
                        },
                        fh,
                    )
                    fh.write("\n")
                entries.append(
                    {
                        "file": name,
                        "entropy_bin": eb,
                        "cv_bin": cb,
                        "index": i,
                        "prior_entropy": entropy(problem.priors),
                        "cost_cv": coefficient_of_variation(problem.costs),
                    }
                )
    manifest = {
        "seed": seed,
        "rows": rows,
        "cols": cols,
        "per_cell": per_cell,
        "rng": RNG_NAME,
        "numpy_version": np.__version__,
        "problems": entries,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest
