"""Command-line entry point: run scenarios, list them, explain check ids."""

import argparse
import logging
import sys
from pathlib import Path

from .pipelines import run_scenario
from .report import UnknownCheckError, explain, render_json, render_text
from .scenarios import ScenarioError, catalog, load_bundled, load_file
from .settings import settings

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_SCENARIO = 2
EXIT_USAGE = 3


class UsageError(Exception):
    """Raised for a request the CLI cannot interpret, such as an unknown scenario name."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(target: str):
    path = Path(target)
    if path.is_file() or target.endswith(".json"):
        return load_file(path)
    try:
        return load_bundled(target)
    except KeyError:
        raise UsageError(f"'{target}' is neither a scenario file nor a bundled scenario (see 'gkreduce list')") from None


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args.target)
    report = run_scenario(scenario, include_timings=args.timings or None)
    rendered = render_json(report) if args.format == "json" else render_text(report)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        logger.info(f"Report written to {args.out}")
    sys.stdout.write(rendered)
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED


def cmd_list(args: argparse.Namespace) -> int:
    rows = catalog()
    width = max((len(name) for name, _, _ in rows), default=0)
    kind_width = max((len(kind) for _, kind, _ in rows), default=0)
    for name, kind, description in rows:
        sys.stdout.write(f"{name:<{width}}  {kind:<{kind_width}}  {description}\n")
    return EXIT_PASS


def cmd_explain(args: argparse.Namespace) -> int:
    try:
        sys.stdout.write(explain(args.check_id) + "\n")
    except UnknownCheckError as e:
        raise UsageError(str(e)) from e
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gkreduce",
        description="Exact verification of generalized Kähler reduction and T-duality identities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Run a bundled scenario
  gkreduce run cp2-example

  # Run a scenario file and keep a JSON report
  gkreduce run my-scenario.json --format json --out report.json

  # List bundled scenarios
  gkreduce list

  # What does a check id verify?
  gkreduce explain duality-residual

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid scenario, 3 usage error.
""",
    )
    parser.add_argument("--log-level", default=None, help="Logging level for stderr (default: GKREDUCE_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    run = commands.add_parser("run", help="Run a scenario file or a bundled scenario by name")
    run.add_argument("target", help="Path to a scenario JSON file, or the name of a bundled scenario")
    run.add_argument("--format", choices=["text", "json"], default="text", help="Report format (default: text)")
    run.add_argument("--out", metavar="FILE", help="Also write the report to FILE")
    run.add_argument("--timings", action="store_true", help="Include per-check wall time in the report")
    run.set_defaults(handler=cmd_run)

    listing = commands.add_parser("list", help="List bundled scenarios")
    listing.set_defaults(handler=cmd_list)

    explain_cmd = commands.add_parser("explain", help="Show what a check id verifies")
    explain_cmd.add_argument("check_id")
    explain_cmd.set_defaults(handler=cmd_explain)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.getLevelName(args.log_level.upper()) if args.log_level else settings.numeric_log_level
    logging.basicConfig(
        level=level if isinstance(level, int) else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as e:
        sys.stderr.write(f"gkreduce: error: {e}\n")
        return EXIT_USAGE
    except ScenarioError as e:
        logger.debug("Scenario rejected", exc_info=True)
        sys.stderr.write(f"gkreduce: invalid scenario: {e}\n")
        return EXIT_INVALID_SCENARIO


if __name__ == "__main__":
    sys.exit(main())
