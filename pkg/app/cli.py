"""
Command-line entry point: python -m app.cli <command> [input] [flags].

JSON reports go to stdout (or --out); logs go to stderr. Exit codes are 0 on
success, 2 when the input fails domain validation and 1 on I/O or parse errors.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED, LOG_LEVEL, RESTRICTION_TRIALS, VERIFY_POINTS
from app.core.exceptions import InputParseError, MatrixAnalyticError
from app.models.responses import ErrorResponse
from app.models.run_config import RunConfig, parse_floats, parse_tolerances
from app.services.workflow_service import (cmd_check_mphstar, cmd_project, cmd_realize, cmd_simulate,
                                           cmd_wishart_demo, dump, load_check_input, load_rep, load_transform)

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="app.cli", description="Multivariate matrix-analytic reward laws")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE",
                        help="tolerance override, repeatable")

    sub = parser.add_subparsers(dest="command", required=True)

    realize = sub.add_parser("realize", parents=[common], help="rational transform to representation")
    realize.add_argument("input", help="transform JSON path, or - for stdin")
    realize.add_argument("--points", type=int, default=VERIFY_POINTS)

    check = sub.add_parser("check-mphstar", parents=[common], help="leading-part verdict")
    check.add_argument("input", help="polynomial, representation or realize report JSON")
    check.add_argument("--minimal", action="store_true", help="declare the polynomial a minimal denominator")
    check.add_argument("--trials", type=int, default=RESTRICTION_TRIALS)

    project = sub.add_parser("project", parents=[common], help="univariate law of <a, X>")
    project.add_argument("input", help="representation or realize report JSON")
    project.add_argument("--a", required=True, help="comma-separated direction")
    project.add_argument("--u", default="0,0.5,1,2", help="comma-separated transform arguments")

    simulate = sub.add_parser("simulate", parents=[common], help="reward-path summary")
    simulate.add_argument("input", help="representation or realize report JSON")

    sub.add_parser("wishart-demo", parents=[common], help="Wishart separation report")
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    fields: Dict[str, Any] = dict(command=args.command, input_path=getattr(args, "input", None),
                                  output_path=args.out, seed=args.seed, tolerances=parse_tolerances(args.tol))
    if args.samples is not None:
        fields["samples"] = args.samples
    elif args.command == "project":
        fields["samples"] = 0
    for name in ("trials", "points", "minimal"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if args.command == "project":
        fields["direction"] = parse_floats(args.a)
        fields["u_grid"] = parse_floats(args.u)
    return RunConfig(**fields)


def read_document(path: str) -> Dict[str, Any]:
    if path == "-":
        doc = json.load(sys.stdin)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InputParseError("top-level JSON value must be an object")
    return doc


def write_document(doc: Dict[str, Any], path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(config: RunConfig) -> Dict[str, Any]:
    if config.command == "realize":
        transform = load_transform(read_document(config.input_path))
        response = cmd_realize(transform, seed=config.seed, points=config.points, tolerances=config.tolerances)
    elif config.command == "check-mphstar":
        Q, rep, minimal = load_check_input(read_document(config.input_path))
        response = cmd_check_mphstar(Q=Q, rep=rep, minimal_declared=minimal or config.minimal,
                                     trials=config.trials, seed=config.seed)
    elif config.command == "project":
        rep = load_rep(read_document(config.input_path))
        response = cmd_project(rep, config.direction, u_grid=config.u_grid, samples=config.samples,
                               seed=config.seed)
    elif config.command == "simulate":
        rep = load_rep(read_document(config.input_path))
        response = cmd_simulate(rep, samples=config.samples, seed=config.seed, tolerances=config.tolerances)
    else:
        response = cmd_wishart_demo(seed=config.seed, samples=config.samples)
    return dump(response)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = to_run_config(args)
        logger.info(f"Running {config.command}", extra={"operation": "cli", "seed": config.seed})
        write_document(run(config), config.output_path)
        return EXIT_OK
    except InputParseError as exc:
        return _fail(exc, EXIT_IO)
    except MatrixAnalyticError as exc:
        return _fail(exc, EXIT_VALIDATION if exc.status_code == 422 else EXIT_IO)
    except (OSError, json.JSONDecodeError, ValidationError, ValueError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_IO


def _fail(exc: MatrixAnalyticError, code: int) -> int:
    error = ErrorResponse(error=str(exc.detail), error_code=type(exc).__name__, status_code=exc.status_code)
    logger.error(error.model_dump_json(by_alias=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
