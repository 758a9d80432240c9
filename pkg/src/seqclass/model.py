"""Problem definition and the shared statistical primitives.

A classification problem is a matrix of distinct binary patterns (one row
per class), a prior probability for each row, and a positive inspection
cost for each column. Everything downstream (exact solver, heuristics,
benchmarks, the consultation service) works on this triple.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

PRIOR_SUM_TOL = 1e-9


class ProblemFormatError(ValueError):
    """Raised when a problem file or body is structurally malformed."""


@dataclass(frozen=True)
class Problem:
    """A sequential classification problem (patterns, priors, costs).

    Construction only enforces shape (rectangular 0/1 matrix, matching
    lengths). Semantic checks such as row distinctness live in
    :func:`validate`, which reports instead of raising, so that invalid
    inputs can be surfaced with a full list of violations.
    """

    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    priors: tuple[float, ...]
    costs: tuple[float, ...]
    column_names: tuple[str, ...] | None = None
    _col_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        matrix = tuple(tuple(int(v) for v in row) for row in self.matrix)
        priors = tuple(float(x) for x in self.priors)
        costs = tuple(float(x) for x in self.costs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "costs", costs)
        if self.column_names is not None:
            object.__setattr__(self, "column_names", tuple(str(x) for x in self.column_names))

        if not matrix or not matrix[0]:
            raise ProblemFormatError("matrix must have at least one row and one column")
        n = len(matrix[0])
        if any(len(row) != n for row in matrix):
            raise ProblemFormatError("matrix rows are ragged")
        if any(v not in (0, 1) for row in matrix for v in row):
            raise ProblemFormatError("matrix entries must be 0 or 1")
        if len(labels) != len(matrix):
            raise ProblemFormatError("labels length must match the number of rows")
        if len(priors) != len(matrix):
            raise ProblemFormatError("priors length must match the number of rows")
        if len(costs) != n:
            raise ProblemFormatError("costs length must match the number of columns")
        if self.column_names is not None and len(self.column_names) != n:
            raise ProblemFormatError("column_names length must match the number of columns")

        # Column bitmasks (bit i set iff row i has a 1 in the column) are the
        # representation every solver kernel runs on; precompute once.
        masks = []
        for j in range(n):
            m = 0
            for i, row in enumerate(matrix):
                if row[j]:
                    m |= 1 << i
            masks.append(m)
        object.__setattr__(self, "_col_masks", tuple(masks))

    @property
    def n_rows(self) -> int:
        return len(self.matrix)

    @property
    def n_cols(self) -> int:
        return len(self.matrix[0])

    @property
    def column_masks(self) -> tuple[int, ...]:
        return self._col_masks

    @property
    def full_mask(self) -> int:
        return (1 << self.n_rows) - 1

    def value(self, row: int, column: int) -> int:
        return self.matrix[row][column]


@dataclass(frozen=True)
class SurvivorSet:
    """Rows still consistent with the observations so far.

    Stored as a bitmask (bit i = row i survives) with the total prior mass
    cached at construction.
    """

    mask: int
    mass: float

    @classmethod
    def of(cls, problem: Problem, rows: Iterable[int]) -> "SurvivorSet":
        mask = 0
        for i in rows:
            if not 0 <= i < problem.n_rows:
                raise ValueError(f"row index {i} out of range")
            mask |= 1 << i
        return cls.from_mask(problem, mask)

    @classmethod
    def full(cls, problem: Problem) -> "SurvivorSet":
        return cls.from_mask(problem, problem.full_mask)

    @classmethod
    def from_mask(cls, problem: Problem, mask: int) -> "SurvivorSet":
        total = 0.0
        m = mask
        while m:
            total += problem.priors[(m & -m).bit_length() - 1]
            m &= m - 1
        return cls(mask, total)

    def rows(self) -> tuple[int, ...]:
        out = []
        m = self.mask
        while m:
            out.append((m & -m).bit_length() - 1)
            m &= m - 1
        return tuple(out)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, row: int) -> bool:
        return bool(self.mask >> row & 1)


@dataclass(frozen=True)
class ColumnSplit:
    """Partition of a survivor set by the value in one column."""

    column: int
    zero: SurvivorSet
    one: SurvivorSet
    w0: float
    w1: float

    @property
    def informative(self) -> bool:
        return self.zero.mask != 0 and self.one.mask != 0


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


def validate(problem: Problem) -> ValidationReport:
    """Check the semantic invariants; returns a report, never raises.

    Violations make the problem unusable by solvers; warnings (constant,
    i.e. informationless, columns) are allowed but solvers will never
    inspect such columns.
    """
    violations: list[str] = []
    warnings: list[str] = []

    seen: dict[tuple[int, ...], int] = {}
    for i, row in enumerate(problem.matrix):
        if row in seen:
            violations.append(f"duplicate rows {seen[row]},{i}")
        else:
            seen[row] = i

    for j, cost in enumerate(problem.costs):
        if not cost > 0:
            violations.append(f"cost {j} must be positive, got {cost}")
        if not math.isfinite(cost):
            violations.append(f"cost {j} is not finite")

    total = 0.0
    for i, p in enumerate(problem.priors):
        if p < 0:
            violations.append(f"prior {i} is negative: {p}")
        total += p
    if abs(total - 1.0) > PRIOR_SUM_TOL:
        violations.append(f"priors sum to {total!r}, expected 1.0")

    constant = [
        j
        for j, m in enumerate(problem.column_masks)
        if m == 0 or m == problem.full_mask
    ]
    if len(constant) == problem.n_cols:
        warnings.append("all columns informationless")
    else:
        for j in constant:
            warnings.append(f"column {j} informationless (constant)")

    return ValidationReport(tuple(violations), tuple(warnings))


def entropy(weights: Sequence[float]) -> float:
    """Shannon entropy in bits of a weight vector, normalized internally.

    Zero weights contribute nothing; an all-zero (or empty) input is an
    error because there is no distribution to measure.
    """
    total = 0.0
    for w in weights:
        if w < 0:
            raise ValueError(f"negative weight {w}")
        total += w
    if total <= 0.0:
        raise ValueError("empty distribution")
    h = 0.0
    for w in weights:
        if w > 0:
            q = w / total
            h -= q * math.log2(q)
    return h


def coefficient_of_variation(costs: Sequence[float]) -> float:
    """Population standard deviation over mean. Zero for constant vectors."""
    if not costs:
        raise ValueError("empty cost vector")
    n = len(costs)
    mean = sum(costs) / n
    if mean == 0:
        raise ValueError("zero mean")
    var = sum((x - mean) ** 2 for x in costs) / n
    return math.sqrt(var) / mean


def split(problem: Problem, survivors: SurvivorSet, column: int) -> ColumnSplit:
    """Partition survivors by their value in `column`.

    Branch weights are conditional probabilities given the survivor set;
    when the surviving mass is zero they fall back to row counts so that
    w0 + w1 = 1 still holds.
    """
    if not 0 <= column < problem.n_cols:
        raise ValueError(f"column {column} out of range")
    if survivors.mask == 0:
        raise ValueError("empty survivor set")
    one_mask = survivors.mask & problem.column_masks[column]
    zero_mask = survivors.mask & ~problem.column_masks[column]
    one = SurvivorSet.from_mask(problem, one_mask)
    zero = SurvivorSet.from_mask(problem, zero_mask)
    if survivors.mass > 0.0:
        w0 = zero.mass / survivors.mass
        w1 = one.mass / survivors.mass
    else:
        w0 = zero_mask.bit_count() / survivors.mask.bit_count()
        w1 = one_mask.bit_count() / survivors.mask.bit_count()
    return ColumnSplit(column, zero, one, w0, w1)


def problem_to_dict(problem: Problem) -> dict:
    out = {
        "labels": list(problem.labels),
        "matrix": [list(row) for row in problem.matrix],
        "p": list(problem.priors),
        "c": list(problem.costs),
    }
    if problem.column_names is not None:
        out["column_names"] = list(problem.column_names)
    return out


def problem_from_dict(data: object) -> Problem:
    """Parse the problem file schema; strict about 0/1 integer entries."""
    if not isinstance(data, dict):
        raise ProblemFormatError("problem body must be a JSON object")
    missing = [k for k in ("labels", "matrix", "p", "c") if k not in data]
    if missing:
        raise ProblemFormatError(f"missing fields: {', '.join(missing)}")
    matrix = data["matrix"]
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise ProblemFormatError("matrix must be a list of rows")
    for row in matrix:
        for v in row:
            # bools are ints in Python; the file format wants literal 0/1
            if type(v) is not int or v not in (0, 1):
                raise ProblemFormatError(f"matrix entries must be 0 or 1, got {v!r}")
    if matrix and any(len(r) != len(matrix[0]) for r in matrix):
        raise ProblemFormatError("matrix rows are ragged")
    labels = data["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ProblemFormatError("labels must be a list of strings")
    for key in ("p", "c"):
        vals = data[key]
        if not isinstance(vals, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in vals
        ):
            raise ProblemFormatError(f"{key} must be a list of numbers")
    column_names = data.get("column_names")
    if column_names is not None and (
        not isinstance(column_names, list)
        or not all(isinstance(x, str) for x in column_names)
    ):
        raise ProblemFormatError("column_names must be a list of strings")
    try:
        return Problem(
            labels=tuple(labels),
            matrix=tuple(tuple(r) for r in matrix),
            priors=tuple(data["p"]),
            costs=tuple(data["c"]),
            column_names=tuple(column_names) if column_names is not None else None,
        )
    except ProblemFormatError:
        raise
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def load_problem(path) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return problem_from_dict(data)


def dump_problem(problem: Problem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem), fh, indent=2)
        fh.write("\n")
