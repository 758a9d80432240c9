"""Command-line entry point.

Subcommands: solve, eval, gen, bench, reduce-setcover, serve.
Exit codes: 0 success, 1 domain failure (e.g. an invalid tree under eval),
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .bench import METHODS, emit_report, grid_to_csv, measure_scaling, run_grid
from .exact import solve_dp
from .generator import write_problem_set
from .heuristics import (
    ENTROPY_RULES,
    REDUCTION_PER_COST,
    build_entropy_tree,
    build_hybrid_tree,
    build_signature_tree,
)
from .model import ProblemFormatError, load_problem
from .reduction import (
    DegenerateReductionError,
    appendix_bounds,
    brute_force_cover,
    decide_cover,
    load_set_cover,
    reduce_to_problem,
)
from .tree import dump_tree, expected_cost, load_tree, tree_to_dict, verify


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # registered on the main parser and every subcommand, so the flags work
    # in either position; the subcommand level must not clobber values
    # already parsed at the top level
    kwargs = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--seed", type=int, help="master seed for gen/bench", **kwargs)
    parser.add_argument("--format", choices=("json", "csv", "text"),
                        help="output format where applicable", **kwargs)
    parser.add_argument("--entropy-rule", choices=ENTROPY_RULES,
                        help="scoring rule for the entropy heuristic", **kwargs)
    if not suppress:
        parser.set_defaults(seed=0, format="text", entropy_rule=REDUCTION_PER_COST)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqclass",
        description="Minimum-expected-cost sequential classification",
    )
    parser.add_argument("--version", action="version", version=f"seqclass {__version__}")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="build a tree for a problem file")
    _globals(p, suppress=True)
    p.add_argument("--input", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--output", help="write the tree as JSON here")

    p = sub.add_parser("eval", help="verify and cost a tree against a problem")
    _globals(p, suppress=True)
    p.add_argument("--input", required=True)
    p.add_argument("--tree", required=True)

    p = sub.add_parser("gen", help="generate stratified problem files")
    _globals(p, suppress=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--per-cell", type=int, default=50)
    p.add_argument("--out", required=True)
    p.add_argument("--entropy-bin", type=int, action="append", dest="entropy_bins")
    p.add_argument("--cv-bin", type=int, action="append", dest="cv_bins")

    p = sub.add_parser("bench", help="heuristics vs the exact optimum over the grid")
    _globals(p, suppress=True)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--per-cell", type=int, default=50)
    p.add_argument("--methods", default="entropy,signature,hybrid")
    p.add_argument("--out", help="directory for grid.csv, tables and manifest")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--scaling", action="store_true", help="also measure size scaling")

    p = sub.add_parser("reduce-setcover", help="decide a set-cover file via the reduction")
    _globals(p, suppress=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="write the reduced problem as JSON here")

    p = sub.add_parser("serve", help="run the consultation HTTP service")
    _globals(p, suppress=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data", default=None, help="journal directory")
    p.add_argument("--ui", default=None, help="built frontend bundle directory")

    return parser


def _cmd_solve(args) -> int:
    problem = load_problem(args.input)
    from .model import validate

    report = validate(problem)
    if not report.valid:
        for v in report.violations:
            print(f"invalid problem: {v}", file=sys.stderr)
        return 2
    if args.method == "dp":
        tree, cost = solve_dp(problem)
    elif args.method == "entropy":
        tree = build_entropy_tree(problem, rule=args.entropy_rule)
        cost = expected_cost(tree, problem)
    elif args.method == "signature":
        tree = build_signature_tree(problem)
        cost = expected_cost(tree, problem)
    else:
        tree = build_hybrid_tree(problem, rule=args.entropy_rule)
        cost = expected_cost(tree, problem)
    if args.output:
        dump_tree(tree, args.output)
    if args.format == "json":
        print(json.dumps({"method": args.method, "expected_cost": cost,
                          "tree": tree_to_dict(tree)}))
    else:
        print(f"{cost:.6f}")
    return 0


def _cmd_eval(args) -> int:
    problem = load_problem(args.input)
    tree = load_tree(args.tree)
    ok, failing = verify(tree, problem)
    if not ok:
        print(f"invalid tree: row {failing + 1} is misclassified or repeats a column")
        return 1
    cost = expected_cost(tree, problem)
    if args.format == "json":
        print(json.dumps({"valid": True, "expected_cost": cost}))
    else:
        print(f"valid {cost:.6f}")
    return 0


def _cmd_gen(args) -> int:
    manifest = write_problem_set(
        args.out, args.rows, args.cols, args.per_cell, args.seed,
        entropy_bins=args.entropy_bins, cv_bins=args.cv_bins,
    )
    print(f"wrote {len(manifest['problems'])} problems to {args.out}")
    return 0


def _cmd_bench(args) -> int:
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    grid = run_grid(
        args.rows, args.cols, args.per_cell, args.seed,
        methods=methods, entropy_rule=args.entropy_rule, jobs=args.jobs,
    )
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "grid.csv"), "w", encoding="utf-8") as fh:
            fh.write(grid_to_csv(grid))
        with open(os.path.join(args.out, "tables.md"), "w", encoding="utf-8") as fh:
            fh.write(emit_report(grid, "markdown"))
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(grid.manifest(), fh, indent=2)
            fh.write("\n")
    fmt = "text" if args.format == "text" else args.format
    print(emit_report(grid, fmt))
    if args.scaling:
        print("size scaling (mean ms per solve):")
        for row in measure_scaling(seed=args.seed, entropy_rule=args.entropy_rule):
            print(f"  {row['size']:>2}x{row['size']:<2} {row['method']:<10} {row['mean_ms']:10.3f}")
    return 0


def _cmd_reduce(args) -> int:
    instance = load_set_cover(args.input)
    problem = reduce_to_problem(instance)
    if args.output:
        from .model import dump_problem

        dump_problem(problem, args.output)
    decision = decide_cover(instance)
    lo, v, hi = appendix_bounds(instance, decision)
    if not (lo < v <= hi) and instance.universe:
        print("warning: cost bound chain violated", file=sys.stderr)
    if args.format == "json":
        print(json.dumps({
            "covered": decision.covered,
            "k": instance.k,
            "witness": [j + 1 for j in decision.witness] if decision.witness is not None else None,
            "dominant_path": [j + 1 for j in decision.dominant_path],
            "optimal_cost": float(decision.optimal_cost),
            "brute_force_minimum": brute_force_cover(instance)
            if len(instance.subsets) <= 20 else None,
        }))
    else:
        if decision.covered:
            witness = ", ".join(str(j + 1) for j in decision.witness)
            print(f"yes: subsets {{{witness}}} cover the universe (k={instance.k})")
        else:
            print(f"no: the optimal tree inspects {len(decision.dominant_path)} "
                  f"columns for the all-zeros row (k={instance.k})")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, default_ui_dir

    port = args.port
    if port is None:
        port = int(os.environ.get("SEQCLASS_PORT", "8000"))
    data = args.data or os.environ.get("SEQCLASS_DATA_DIR") or "./seqclass-data"
    ui = args.ui or default_ui_dir()
    app = create_app(data_dir=data, entropy_rule=args.entropy_rule, ui_dir=ui)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "reduce-setcover":
            return _cmd_reduce(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except (ProblemFormatError, DegenerateReductionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
