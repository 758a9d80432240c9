"""Interactive consultation sessions over HTTP.

The engine keeps problems and live sessions in memory, journals every
mutation to an append-only JSONL file (replayed on restart), and
recommends the next question per survivor set using the chosen strategy.
Strict-mode sessions therefore replay exactly one root-to-leaf path of
that strategy's tree; free mode lets the caller answer any uninspected
column, and an answer no known pattern matches ends in a "no_match"
terminal state rather than an error.

Columns are 1-based on the wire (requests, views); internals are 0-based.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import kernels
from .exact import DP_MAX_ROWS
from .heuristics import (
    ENTROPY_RULES,
    REDUCTION_PER_COST,
    build_entropy_tree,
    build_hybrid_tree,
    build_signature_tree,
)
from .model import Problem, problem_from_dict, problem_to_dict, validate
from .tree import Inspect, expected_cost, tree_to_dict

STRATEGIES = ("dp", "entropy", "signature", "hybrid")
MODES = ("strict", "free")


class ServiceError(Exception):
    def __init__(self, status: int, detail):
        super().__init__(detail)
        self.status = status
        self.detail = detail


@dataclass
class _SessionState:
    id: str
    problem_id: str
    strategy: str
    mode: str
    mask: int
    cost: float = 0.0
    observed: list[tuple[int, bool]] = field(default_factory=list)
    status: str = "active"
    label: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class _Recommender:
    """Per-problem strategy caches: survivor mask -> recommended column."""

    def __init__(self, problem: Problem, entropy_rule: str):
        self.problem = problem
        self.entropy_rule = entropy_rule
        self._dp_choices: dict[int, int] | None = None
        self._picks: dict[tuple[str, int], int] = {}
        self._hybrid_choices: dict[int, int] = {}
        self._lock = threading.Lock()

    def recommend(self, strategy: str, smask: int) -> int:
        with self._lock:
            return self._recommend(strategy, smask)

    def _recommend(self, strategy: str, smask: int) -> int:
        key = (strategy, smask)
        got = self._picks.get(key)
        if got is not None:
            return got
        problem = self.problem
        kern = kernels.get(problem.n_rows, problem.n_cols)
        if strategy == "dp":
            if problem.n_rows > DP_MAX_ROWS:
                raise ServiceError(422, f"dp strategy is capped at {DP_MAX_ROWS} rows")
            if self._dp_choices is None or smask not in self._dp_choices:
                _, choices = kern.dp_table(
                    problem.column_masks, problem.priors, problem.costs, smask
                )
                if self._dp_choices is None:
                    self._dp_choices = choices
                else:
                    self._dp_choices.update(choices)
            col = self._dp_choices[smask]
        elif strategy == "entropy":
            col, _ = kern.entropy_pick(
                problem.column_masks,
                problem.priors,
                problem.costs,
                smask,
                problem.n_rows,
                self.entropy_rule == REDUCTION_PER_COST,
            )
        elif strategy == "signature":
            col, _, _ = kern.signature_pick(
                problem.column_masks,
                problem.priors,
                problem.costs,
                smask,
                problem.n_rows,
            )
        elif strategy == "hybrid":
            col = self._hybrid_pick(smask)
        else:
            raise ServiceError(422, f"unknown strategy {strategy!r}")
        self._picks[key] = col
        return col

    def _hybrid_pick(self, smask: int) -> int:
        got = self._hybrid_choices.get(smask)
        if got is not None:
            return got
        problem = self.problem
        kern = kernels.get(problem.n_rows, problem.n_cols)
        _, choices = kern.hybrid_table(
            problem.column_masks,
            problem.priors,
            problem.costs,
            smask,
            problem.n_rows,
            self.entropy_rule == REDUCTION_PER_COST,
        )
        self._hybrid_choices.update(choices)
        return self._hybrid_choices[smask]


class Engine:
    """Problem and session store with journal-backed persistence."""

    def __init__(self, data_dir: str | Path | None = None,
                 entropy_rule: str = REDUCTION_PER_COST):
        if entropy_rule not in ENTROPY_RULES:
            raise ValueError(f"unknown entropy rule {entropy_rule!r}")
        self.entropy_rule = entropy_rule
        self._problems: dict[str, Problem] = {}
        self._recommenders: dict[str, _Recommender] = {}
        self._sessions: dict[str, _SessionState] = {}
        self._store_lock = threading.Lock()
        self._journal_path: Path | None = None
        self._journal_lock = threading.Lock()
        if data_dir is not None:
            data_dir = Path(data_dir)
            data_dir.mkdir(parents=True, exist_ok=True)
            self._journal_path = data_dir / "journal.jsonl"
            self._replay()

    # -- journal ------------------------------------------------------------

    def _journal(self, event: dict) -> None:
        if self._journal_path is None:
            return
        line = json.dumps(event, separators=(",", ":"))
        with self._journal_lock:
            with open(self._journal_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _replay(self) -> None:
        if self._journal_path is None or not self._journal_path.exists():
            return
        path, self._journal_path = self._journal_path, None  # mute journaling
        try:
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    event = json.loads(line)
                    kind = event["event"]
                    if kind == "problem":
                        self.add_problem(event["body"], forced_id=event["id"])
                    elif kind == "session":
                        self.start_session(
                            event["problem_id"],
                            event["strategy"],
                            event["mode"],
                            forced_id=event["id"],
                        )
                    elif kind == "answer":
                        self.answer(event["session_id"], event["column"], event["value"])
                    elif kind == "delete_session":
                        self.delete_session(event["id"])
        finally:
            self._journal_path = path

    # -- problems -----------------------------------------------------------

    def add_problem(self, body: dict, forced_id: str | None = None) -> tuple[str, dict]:
        try:
            problem = problem_from_dict(body)
        except ValueError as exc:
            raise ServiceError(400, {"violations": [str(exc)], "warnings": []})
        report = validate(problem)
        if not report.valid:
            raise ServiceError(
                400,
                {"violations": list(report.violations), "warnings": list(report.warnings)},
            )
        pid = forced_id or ("p-" + uuid.uuid4().hex[:12])
        with self._store_lock:
            self._problems[pid] = problem
            self._recommenders[pid] = _Recommender(problem, self.entropy_rule)
        self._journal({"event": "problem", "id": pid, "body": problem_to_dict(problem)})
        return pid, {"warnings": list(report.warnings)}

    def get_problem(self, problem_id: str) -> Problem:
        problem = self._problems.get(problem_id)
        if problem is None:
            raise ServiceError(404, f"unknown problem {problem_id!r}")
        return problem

    def list_problems(self) -> list[dict]:
        with self._store_lock:
            items = list(self._problems.items())
        return [
            {"id": pid, "rows": p.n_rows, "cols": p.n_cols, "labels": list(p.labels)}
            for pid, p in items
        ]

    def problem_view(self, problem_id: str) -> dict:
        problem = self.get_problem(problem_id)
        body = problem_to_dict(problem)
        body["id"] = problem_id
        return body

    # -- trees --------------------------------------------------------------

    def strategy_tree(self, problem_id: str, method: str, entropy_rule: str | None = None) -> dict:
        problem = self.get_problem(problem_id)
        rule = entropy_rule or self.entropy_rule
        if rule not in ENTROPY_RULES:
            raise ServiceError(422, f"unknown entropy rule {rule!r}")
        if method == "dp":
            if problem.n_rows > DP_MAX_ROWS:
                raise ServiceError(422, f"dp strategy is capped at {DP_MAX_ROWS} rows")
            from .exact import solve_dp

            tree, cost = solve_dp(problem)
        elif method == "entropy":
            tree = build_entropy_tree(problem, rule=rule)
            cost = expected_cost(tree, problem)
        elif method == "signature":
            tree = build_signature_tree(problem)
            cost = expected_cost(tree, problem)
        elif method == "hybrid":
            tree = build_hybrid_tree(problem, rule=rule)
            cost = expected_cost(tree, problem)
        else:
            raise ServiceError(422, f"unknown strategy {method!r}")
        root = tree.column + 1 if isinstance(tree, Inspect) else None
        return {
            "method": method,
            "entropy_rule": rule if method in ("entropy", "hybrid") else None,
            "expected_cost": cost,
            "root_column": root,
            "tree": tree_to_dict(tree),
        }

    # -- sessions -----------------------------------------------------------

    def start_session(
        self, problem_id: str, strategy: str, mode: str = "strict",
        forced_id: str | None = None,
    ) -> dict:
        problem = self.get_problem(problem_id)
        if strategy not in STRATEGIES:
            raise ServiceError(422, f"strategy must be one of {STRATEGIES}")
        if mode not in MODES:
            raise ServiceError(422, f"mode must be one of {MODES}")
        if strategy == "dp" and problem.n_rows > DP_MAX_ROWS:
            raise ServiceError(422, f"dp strategy is capped at {DP_MAX_ROWS} rows")
        sid = forced_id or ("s-" + uuid.uuid4().hex[:12])
        state = _SessionState(
            id=sid,
            problem_id=problem_id,
            strategy=strategy,
            mode=mode,
            mask=problem.full_mask,
        )
        if problem.n_rows == 1:
            state.status = "classified"
            state.label = problem.labels[0]
        with self._store_lock:
            self._sessions[sid] = state
        self._journal(
            {"event": "session", "id": sid, "problem_id": problem_id,
             "strategy": strategy, "mode": mode}
        )
        return self._view(state)

    def _get_state(self, session_id: str) -> _SessionState:
        state = self._sessions.get(session_id)
        if state is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        return state

    def get_session(self, session_id: str) -> dict:
        return self._view(self._get_state(session_id))

    def delete_session(self, session_id: str) -> None:
        with self._store_lock:
            if session_id not in self._sessions:
                raise ServiceError(404, f"unknown session {session_id!r}")
            del self._sessions[session_id]
        self._journal({"event": "delete_session", "id": session_id})

    def answer(self, session_id: str, column: int, value: bool) -> dict:
        """Record an answer for a 0-based column and advance the session."""
        state = self._get_state(session_id)
        problem = self.get_problem(state.problem_id)
        with state.lock:
            if state.status != "active":
                raise ServiceError(409, f"session is settled ({state.status})")
            if not 0 <= column < problem.n_cols:
                raise ServiceError(400, f"column {column + 1} out of range")
            if any(c == column for c, _ in state.observed):
                raise ServiceError(409, f"column {column + 1} was already answered")
            if state.mode == "strict":
                expected = self._recommend(state)
                if column != expected:
                    raise ServiceError(
                        400,
                        f"strict mode: expected an answer for column {expected + 1}, "
                        f"got {column + 1}",
                    )
            cm = problem.column_masks[column]
            new_mask = state.mask & (cm if value else ~cm)
            state.observed.append((column, bool(value)))
            state.cost += problem.costs[column]
            state.mask = new_mask
            if new_mask == 0:
                state.status = "no_match"
            elif new_mask & (new_mask - 1) == 0:
                state.status = "classified"
                state.label = problem.labels[new_mask.bit_length() - 1]
            view = self._view(state)
        self._journal(
            {"event": "answer", "session_id": session_id, "column": column,
             "value": bool(value)}
        )
        return view

    def _recommend(self, state: _SessionState) -> int:
        rec = self._recommenders[state.problem_id]
        return rec.recommend(state.strategy, state.mask)

    def _view(self, state: _SessionState) -> dict:
        problem = self.get_problem(state.problem_id)
        posterior = []
        if state.mask:
            m = state.mask
            total = 0.0
            rows = []
            while m:
                i = (m & -m).bit_length() - 1
                rows.append(i)
                total += problem.priors[i]
                m &= m - 1
            for i in rows:
                q = problem.priors[i] / total if total > 0 else 1.0 / len(rows)
                posterior.append({"label": problem.labels[i], "probability": q})
        recommendation = None
        if state.status == "active":
            col = self._recommend(state)
            name = None
            if problem.column_names is not None:
                name = problem.column_names[col]
            recommendation = {
                "column": col + 1,
                "cost": problem.costs[col],
                "name": name,
            }
        return {
            "id": state.id,
            "problem_id": state.problem_id,
            "strategy": state.strategy,
            "mode": state.mode,
            "status": state.status,
            "observed": [
                {"column": c + 1, "value": v} for c, v in state.observed
            ],
            "cost_so_far": state.cost,
            "posterior": posterior,
            "recommendation": recommendation,
            "classified_label": state.label,
        }


def create_app(data_dir: str | Path | None = None,
               entropy_rule: str = REDUCTION_PER_COST,
               ui_dir: str | Path | None = None):
    """FastAPI application wrapping an Engine."""
    engine = Engine(data_dir=data_dir, entropy_rule=entropy_rule)
    app = FastAPI(title="seqclass consultation service")
    app.state.engine = engine

    @app.exception_handler(ServiceError)
    async def _service_error(_req, exc: ServiceError):
        detail = exc.detail if isinstance(exc.detail, dict) else {"error": exc.detail}
        return JSONResponse(status_code=exc.status, content=detail)

    @app.get("/healthz")
    async def healthz():
        return {
            "status": "ok",
            "backend": kernels.backend_name(),
            "problems": len(engine.list_problems()),
        }

    @app.post("/api/problems", status_code=201)
    async def create_problem(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ServiceError(400, {"violations": ["body is not valid JSON"], "warnings": []})
        pid, extra = engine.add_problem(body)
        return {"id": pid, **extra}

    @app.get("/api/problems")
    async def list_problems():
        return {"problems": engine.list_problems()}

    @app.get("/api/problems/{problem_id}")
    async def get_problem(problem_id: str):
        return engine.problem_view(problem_id)

    @app.get("/api/problems/{problem_id}/tree")
    async def get_tree(problem_id: str, method: str = "dp", entropy_rule: str | None = None):
        return engine.strategy_tree(problem_id, method, entropy_rule)

    @app.post("/api/sessions", status_code=201)
    async def start_session(request: Request):
        body = await request.json()
        problem_id = body.get("problem_id")
        strategy = body.get("strategy", "dp")
        mode = body.get("mode", "strict")
        if not isinstance(problem_id, str):
            raise ServiceError(400, "problem_id is required")
        return engine.start_session(problem_id, strategy, mode)

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        return engine.get_session(session_id)

    @app.post("/api/sessions/{session_id}/answers")
    async def post_answer(session_id: str, request: Request):
        body = await request.json()
        column = body.get("column")
        value = body.get("value")
        if type(column) is not int or column < 1:
            raise ServiceError(400, "column must be a 1-based integer")
        if not isinstance(value, bool):
            raise ServiceError(400, "value must be a boolean")
        return engine.answer(session_id, column - 1, value)

    @app.delete("/api/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str):
        engine.delete_session(session_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def default_ui_dir() -> str | None:
    """Built frontend bundle, if present next to the repository root."""
    env = os.environ.get("SEQCLASS_UI_DIR")
    if env:
        return env
    here = Path(__file__).resolve()
    for base in [Path.cwd(), *here.parents]:
        candidate = base / "frontend" / "dist"
        if candidate.is_dir():
            return str(candidate)
    return None
