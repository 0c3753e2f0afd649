"""Command-line front end: run, compare and estimator diagnostics."""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from .config import (
    CANNED_SCENARIOS,
    DEFAULT_LOG_LEVEL,
    EXIT_CONFIG_ERROR,
    EXIT_DIVERGED,
    EXIT_OK,
    INTEGRATION_ORDER_OFFSET,
    LOG_ENV_VAR,
)
from .data.loader import load_canned_scenario, load_scenario
from .estimation.diagnostics import estimator_trace, make_signal, trace_errors
from .estimation.differentiator import EstimatorSpec, build_kernel
from .models.scenario import Scenario
from .output.reporter import (
    export_comparison,
    export_csv,
    export_estimator_trace,
    export_kernel_csv,
    print_comparison,
    print_estimator_report,
    print_run_summary,
)
from .simulation.compare import compare, summarize
from .simulation.engine import SimulationEngine

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    """Log level from MFC_LOG (default WARNING); --verbose raises it to at least INFO."""
    name = os.environ.get(LOG_ENV_VAR, DEFAULT_LOG_LEVEL).upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    if verbose:
        level = min(level, logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="Path to a scenario file (YAML or JSON)")
    source.add_argument(
        "--scenario",
        choices=sorted(CANNED_SCENARIOS),
        help="Built-in scenario",
    )
    parser.add_argument("--seed", type=int, default=None, help="Noise seed (overrides sim.seed)")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a scenario value by dotted path, e.g. channels.1.kd=5 (repeatable)",
    )
    parser.add_argument("--verbose", action="store_true", help="Log progress at INFO level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfcsim",
        description="Model-free control of multivariable systems: closed-loop runs and estimator diagnostics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  mfcsim run --scenario linear-2x2 --out results/linear.csv
  mfcsim run --config my_scenario.yaml --set sim.duration=10 --seed 7
  mfcsim compare --scenario linear-2x2 --out results/compare/
  mfcsim estimator --taylor-order 1 --window 0.5 --period 0.001 --signal sine:1,0.5 --noise-std 0.01

Set {LOG_ENV_VAR}=DEBUG|INFO|WARNING|ERROR for diagnostics on stderr.
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Simulate one scenario and write its time series")
    _add_scenario_arguments(run_parser)
    run_parser.add_argument("--out", default=None, help="CSV output path (default: results/<name>.csv)")

    compare_parser = commands.add_parser(
        "compare", help="Run model-free and classic PID (F = 0) with the same seed"
    )
    _add_scenario_arguments(compare_parser)
    compare_parser.add_argument(
        "--out", default=None, help="Output directory for the two CSVs (default: results/<name>/)"
    )

    est_parser = commands.add_parser("estimator", help="Run a differentiator on a synthetic signal")
    est_parser.add_argument("--taylor-order", type=int, default=1, help="Taylor order N (default: 1)")
    est_parser.add_argument(
        "--integration-order",
        type=int,
        default=None,
        help=f"Integration order nu (default: N + {INTEGRATION_ORDER_OFFSET})",
    )
    est_parser.add_argument("--window", type=float, default=0.5, help="Window length T in s (default: 0.5)")
    est_parser.add_argument("--period", type=float, default=1e-3, help="Sample period h in s (default: 0.001)")
    est_parser.add_argument(
        "--signal",
        default="polynomial:0,1",
        help="polynomial:c0,c1,... | sine:amplitude,freq_hz | csv:path[:column] (default: polynomial:0,1)",
    )
    est_parser.add_argument("--duration", type=float, default=5.0, help="Signal duration in s (default: 5)")
    est_parser.add_argument("--noise-std", type=float, default=0.0, help="Additive white noise std")
    est_parser.add_argument("--seed", type=int, default=None, help="Noise seed")
    est_parser.add_argument("--out", default="results/estimator_trace.csv", help="Trace CSV path")
    est_parser.add_argument(
        "--kernel-out", default=None, help="Kernel weights CSV path (default: <out>_kernel.csv)"
    )
    est_parser.add_argument("--verbose", action="store_true", help="Log progress at INFO level")
    return parser


def _load(args: argparse.Namespace) -> Scenario:
    if args.config is not None:
        scenario = load_scenario(args.config, args.overrides)
    else:
        scenario = load_canned_scenario(args.scenario, args.overrides)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    return scenario


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out = Path(args.out) if args.out else Path("results") / f"{scenario.name}.csv"
    series = SimulationEngine(scenario).run()
    export_csv(series, out)
    print_run_summary(summarize(series, scenario))
    print(f"\nTime series written to: {out}")
    return EXIT_DIVERGED if series.diverged else EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = _load(args)
    out_dir = Path(args.out) if args.out else Path("results") / scenario.name
    result = compare(scenario)
    mf_path, classic_path, summary_path = export_comparison(result, out_dir)
    print_comparison(result)
    print(f"\nResults exported to: {out_dir}/")
    print(f"  - {mf_path.name}, {classic_path.name}, {summary_path.name}")
    if result.classic.diverged:
        logger.info("classic PID run diverged at t=%s s", result.classic.divergence_time)
    return EXIT_DIVERGED if result.model_free.diverged else EXIT_OK


def cmd_estimator(args: argparse.Namespace) -> int:
    nu = args.integration_order
    if nu is None:
        nu = args.taylor_order + INTEGRATION_ORDER_OFFSET
    spec = EstimatorSpec(args.taylor_order, nu, args.window, args.period)
    kernel = build_kernel(spec)
    signal = make_signal(args.signal, args.duration, args.period, args.taylor_order)
    trace = estimator_trace(kernel, signal, noise_std=args.noise_std, seed=args.seed)
    errors = trace_errors(trace, args.period)

    out = Path(args.out)
    kernel_out = Path(args.kernel_out) if args.kernel_out else out.with_name(f"{out.stem}_kernel.csv")
    export_estimator_trace(trace, out)
    export_kernel_csv(kernel, kernel_out)
    print_estimator_report(kernel, errors)
    print(f"\nTrace written to: {out}")
    print(f"Kernel written to: {kernel_out}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "estimator": cmd_estimator,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are configuration errors; exit code 2 means divergence
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG_ERROR
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
