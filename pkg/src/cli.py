"""
Command-line driver
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence, Tuple

from .constants import (
    COMMAND_ANTI_INVARIANT,
    COMMAND_CHECK_STRUCTURE,
    COMMAND_CHECK_SUBMERSION,
    COMMAND_SLANT_ANGLE,
    COMMAND_TENSION,
    COMMAND_VERIFY_IDENTITIES,
    COMMAND_VERIFY_INEQUALITY,
    DEFAULT_DIRECTIONS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EXIT_CHECK_FAILURE,
    EXIT_PASS,
    EXIT_USAGE,
    FORMAT_JSON,
    FORMAT_TEXT,
)
from .commands import CommandEngine, Settings
from .errors import ScenarioError, StructureInvalid, UsageError
from .inequalities import CASE_HORIZONTAL, CASE_VERTICAL
from .report import ReportDocument
from .scenario import load_scenario

logger = logging.getLogger(__name__)

COMMAND_HELP = {
    COMMAND_CHECK_STRUCTURE: "almost contact axioms, closedness, normality and cosymplectic parallelism",
    COMMAND_CHECK_SUBMERSION: "rank and horizontal isometry of the map",
    COMMAND_SLANT_ANGLE: "slant angle over sampled points and directions",
    COMMAND_VERIFY_IDENTITIES: "O'Neill and slant identities",
    COMMAND_VERIFY_INEQUALITY: "mean curvature inequality of the fibres",
    COMMAND_TENSION: "tension field and harmonicity",
    COMMAND_ANTI_INVARIANT: "anti-invariant identities with xi horizontal",
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting"""

    def error(self, message: str) -> None:
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("scenario", help="builtin name such as e3 or mixed-r7(pi/6), or a .json scenario file")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="sampled points (default %(default)s)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PCG64 seed (default %(default)s)")
    common.add_argument("--directions", type=int, default=DEFAULT_DIRECTIONS,
                        help="directions per point for slant angles (default %(default)s)")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="multiplies every default tolerance")
    common.add_argument("--format", choices=(FORMAT_TEXT, FORMAT_JSON), default=FORMAT_TEXT)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--c", type=float, default=None, help="constant phi-sectional curvature of the source")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = ArgumentParser(prog="slantcheck", description="Numerical verification of slant Riemannian submersions")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for name, text in COMMAND_HELP.items():
        sub = subparsers.add_parser(name, parents=[common], help=text, description=text)
        if name == COMMAND_VERIFY_INEQUALITY:
            sub.add_argument("--case", choices=(CASE_VERTICAL, CASE_HORIZONTAL), required=True)
            sub.add_argument("--table", help='hand-set T-components such as "T11^4=3,T22^4=1"')
    return parser


def parse_arguments(argv: Sequence[str]) -> argparse.Namespace:
    args = build_parser().parse_args(list(argv))
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.directions < 1:
        raise UsageError("--directions must be at least 1")
    if not args.tolerance_scale > 0:
        raise UsageError("--tolerance-scale must be positive")
    return args


def settings_from(args: argparse.Namespace) -> Settings:
    return Settings(
        samples=args.samples,
        seed=args.seed,
        directions=args.directions,
        tolerance_scale=args.tolerance_scale,
        case=getattr(args, "case", None),
        c=args.c,
        table=getattr(args, "table", None),
    )


def execute(args: argparse.Namespace) -> Tuple[int, Optional[ReportDocument]]:
    """Load the scenario, run the command and map the outcome to an exit code"""
    try:
        scenario = load_scenario(args.scenario)
        document = CommandEngine().execute(args.command, scenario, settings_from(args))
    except (ScenarioError, UsageError, StructureInvalid) as error:
        logger.error("%s: %s", error.code, error)
        return EXIT_USAGE, None
    return (EXIT_PASS if document.passed else EXIT_CHECK_FAILURE), document


def run_command(argv: Sequence[str]) -> Tuple[int, Optional[ReportDocument]]:
    """Exit code and report for a command line (without the program name)"""
    try:
        args = parse_arguments(argv)
    except UsageError as error:
        logger.error("%s", error)
        return EXIT_USAGE, None
    return execute(args)


def render(document: ReportDocument, output_format: str) -> str:
    return document.to_json() if output_format == FORMAT_JSON else document.to_text()


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_arguments(argv)
    except UsageError as error:
        print(error, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    code, document = execute(args)
    if document is None:
        return code
    text = render(document, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code
