import argparse
import json
import logging
import math
import sys

from algorithms.exact import DecisionInstance, GuardError, decide, optimize_via_decision
from algorithms.greedy import run_greedy
from algorithms.lp_relaxation import build_lp, solve_lp, write_lp_file
from algorithms.rounding import (
    GuaranteeViolationError,
    RoundingError,
    RoundingParams,
    round_lp,
)
from coloring import (
    AssignmentFormatError,
    Variant,
    VariantError,
    VariantKind,
    assignment_to_dict,
    evaluate,
)
from config import ECC_LOG
from datasets import generate_planted
from experiment import ExperimentConfigError, load_config, summary_path, write_experiment
from hypergraph import HypergraphError, dataset_summary, load_hypergraph, structure_stats, write_hypergraph
from lp_solvers import AVAILABLE_SOLVERS, LpSolveError

logger = logging.getLogger(__name__)

PROG = "ecc"

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_GUARD = 4

INPUT_ERRORS = (
    HypergraphError,
    AssignmentFormatError,
    ExperimentConfigError,
    VariantError,
    RoundingError,
    GuaranteeViolationError,
    LpSolveError,
    OSError,
)

_PARAM_FLAGS = {"rho": VariantKind.LOCAL, "delta": VariantKind.GLOBAL, "eps": VariantKind.ROBUST}


def setup_logging():
    logging.basicConfig(
        level=getattr(logging, ECC_LOG, logging.WARNING),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(data: dict):
    print(json.dumps(_jsonable(data), indent=2))


# ── Commands ─────────────────────────────────────────────────────


def cmd_stats(args, parser) -> int:
    hg = load_hypergraph(args.file)
    stats = structure_stats(hg)
    data = {"summary": dataset_summary(hg), "structure": stats.aggregates()}
    if args.nodes:
        data["nodes"] = [
            {
                "node": row.node,
                "degree": row.degree,
                "chromatic_degree": row.chromatic_degree,
                "non_dominant_degree": row.non_dominant_degree,
                "non_dominant_pct": row.non_dominant_pct,
            }
            for row in stats.nodes
        ]
    _emit(data)
    return EXIT_OK


def _rounding_params(args, parser, variant: Variant) -> RoundingParams:
    given = {name: getattr(args, name) for name in _PARAM_FLAGS if getattr(args, name) is not None}
    if len(given) > 1:
        parser.error("give at most one of --rho, --delta, --eps")
    fill = None if args.fill is None else args.fill == "on"
    if not given:
        default = RoundingParams.default_for(variant)
        return RoundingParams(default.kind, default.threshold, fill)

    name, value = next(iter(given.items()))
    if _PARAM_FLAGS[name] is not variant.kind:
        parser.error(f"--{name} does not apply to the {variant.kind.value} variant")
    try:
        return RoundingParams(variant.kind, value, fill)
    except RoundingError as e:
        parser.error(str(e))


def cmd_solve(args, parser) -> int:
    if args.algo != "lp-round":
        if any(getattr(args, name) is not None for name in _PARAM_FLAGS) or args.fill:
            parser.error("--rho/--delta/--eps/--fill only apply to --algo lp-round")
    if args.trace and args.algo != "greedy":
        parser.error("--trace only applies to --algo greedy")

    variant = Variant.parse(args.variant, args.budget)
    params = _rounding_params(args, parser, variant) if args.algo == "lp-round" else None
    hg = load_hypergraph(args.file)

    extra = {"algorithm": args.algo}
    if args.algo == "greedy":
        result = run_greedy(hg, variant)
        assignment = result.assignment
        extra["budget_surplus"] = result.budget_surplus
        if args.trace:
            result.trace_frame().to_csv(args.trace, index=False)
            logger.info("Wrote greedy trace to %s", args.trace)
    elif args.algo == "lp-round":
        solution = solve_lp(build_lp(hg, variant), args.solver)
        rounded = round_lp(hg, variant, solution, params)
        rounded.certificate.verify()
        assignment = rounded.assignment
        extra.update(rounded.certificate.as_dict())
    else:
        optimum, result = optimize_via_decision(hg, variant, use_kernel=args.kernelize)
        assignment = result.assignment
        extra["optimum"] = optimum

    report = evaluate(hg, assignment, variant)
    _emit(assignment_to_dict(variant, assignment, report, **extra))
    return EXIT_OK


def cmd_decide(args, parser) -> int:
    variant = Variant.parse(args.variant, args.budget)
    hg = load_hypergraph(args.file)
    inst = DecisionInstance(hg, variant, args.mistakes)
    result = decide(inst, method=args.method, use_kernel=args.kernelize)
    _emit(result.to_dict(inst))
    return EXIT_OK if result.answer else EXIT_NO


def cmd_lp(args, parser) -> int:
    variant = Variant.parse(args.variant, args.budget)
    hg = load_hypergraph(args.file)
    model = build_lp(hg, variant, sparsify=not args.dense)
    if args.dump_lp:
        write_lp_file(model, args.dump_lp)
    solution = solve_lp(model, args.solver)
    _emit({
        "variant": variant.kind.value,
        "budget": variant.budget,
        "lp_value": solution.objective,
        "variables": model.num_variables,
        "rows": model.num_rows,
        "solver": solution.solver,
        "iterations": solution.iterations,
        "integral": solution.is_integral(),
    })
    return EXIT_OK


def cmd_experiment(args, parser) -> int:
    config = load_config(args.config)
    rows = write_experiment(config, args.out)
    failed = int((rows["error"].fillna("") != "").sum())
    if failed:
        logger.warning("%d of %d rows recorded errors", failed, len(rows))
    print(f"{len(rows)} rows written to {args.out} (summary: {summary_path(args.out)})")
    return EXIT_OK


def cmd_generate(args, parser) -> int:
    try:
        hg = generate_planted(args.nodes, args.colors, args.edges, overlap=args.overlap,
                              noise=args.noise, max_edge_size=args.max_edge_size, seed=args.seed)
    except ValueError as e:
        parser.error(str(e))
    comment = (f"planted overlap: n={args.nodes} k={args.colors} m={args.edges} "
               f"overlap={args.overlap} noise={args.noise} seed={args.seed}")
    write_hypergraph(hg, args.out, comment=comment)
    print(f"{hg!r} written to {args.out}")
    return EXIT_OK


# ── Parser ───────────────────────────────────────────────────────


def _add_variant_args(p: argparse.ArgumentParser):
    p.add_argument("--variant", required=True, choices=[k.value for k in VariantKind])
    p.add_argument("--budget", required=True, type=int, help="budget b")
    p.add_argument("--seed", type=int, default=None, help="reserved; all algorithms are deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Budgeted edge-colored clustering of hypergraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="dataset and non-dominant degree statistics")
    p.add_argument("file")
    p.add_argument("--nodes", action="store_true", help="include the per-node table")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("solve", help="compute a coloring")
    _add_variant_args(p)
    p.add_argument("--algo", required=True, choices=["greedy", "lp-round", "exact"])
    p.add_argument("--rho", type=float, help="local rounding threshold in (0, 1)")
    p.add_argument("--delta", type=float, help="global rounding threshold in (0, 1)")
    p.add_argument("--eps", type=float, help="robust deletion threshold in (0, 1/2)")
    p.add_argument("--fill", choices=["on", "off"], help="give empty nodes their favorite color")
    p.add_argument("--trace", metavar="PATH", help="write the greedy trace as CSV")
    p.add_argument("--solver", choices=AVAILABLE_SOLVERS, help="LP backend")
    p.add_argument("--kernelize", action="store_true", help="reduce before exact search")
    p.add_argument("file")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("decide", help="is there a coloring with at most T mistakes?")
    _add_variant_args(p)
    p.add_argument("--mistakes", required=True, type=int, metavar="T")
    p.add_argument("--kernelize", action="store_true")
    p.add_argument("--method", choices=["branching", "enumeration"], default="branching")
    p.add_argument("file")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("lp", help="LP lower bound")
    _add_variant_args(p)
    p.add_argument("--dump-lp", metavar="PATH", help="write the model in LP format")
    p.add_argument("--dense", action="store_true", help="keep every node-color variable")
    p.add_argument("--solver", choices=AVAILABLE_SOLVERS, help="LP backend")
    p.add_argument("file")
    p.set_defaults(handler=cmd_lp)

    p = sub.add_parser("experiment", help="run a budget sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("generate", help="write a synthetic planted-overlap hypergraph")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--colors", type=int, default=5)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--overlap", type=float, default=0.2)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--max-edge-size", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args, parser)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except GuardError as e:
        print(f"{PROG}: guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except INPUT_ERRORS as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
