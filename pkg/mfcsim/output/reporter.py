"""Console reports and CSV export for simulation runs."""

import math
from pathlib import Path
from typing import Tuple, Union

import pandas as pd

from ..config import CSV_FLOAT_FORMAT, MODE_CLASSIC_PID, MODE_MODEL_FREE
from ..estimation.differentiator import EstimatorKernel
from .results import ComparisonResult, RunSummary, TimeSeries

PathLike = Union[str, Path]


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    if math.isinf(value):
        return "inf"
    return f"{value:.4g}"


def print_run_summary(summary: RunSummary) -> None:
    """Print the summary of one run."""
    print(f"\n{'=' * 60}")
    print(f"{summary.scenario_name} [{summary.mode}]  seed {summary.seed}")
    print(f"{'=' * 60}")
    print(f"Ticks: {summary.ticks}")

    print(f"\n{'Output':<12}{'RMSE':>14}{'Ref span':>14}{'RMSE/span':>14}")
    print("-" * 54)
    for label, rmse in summary.rmse.items():
        span = summary.reference_span.get(label)
        ratio = rmse / span if span else None
        row = f"{label:<12}{_fmt(rmse):>14}{_fmt(span):>14}"
        row += f"{(f'{ratio * 100:.2f}%' if ratio is not None and math.isfinite(ratio) else 'n/a'):>14}"
        print(row)

    print(f"\n{'Input':<12}{'max |u|':>14}")
    print("-" * 26)
    for label, value in summary.max_abs_u.items():
        print(f"{label:<12}{_fmt(value):>14}")

    if summary.diverged:
        print(
            f"\nDIVERGED at t={_fmt(summary.divergence_time)} s: {summary.divergence_reason}"
        )
    else:
        print("\nDiverged: no")


def print_comparison(result: ComparisonResult) -> None:
    """Print the head-to-head RMSE table of a comparison."""
    mf = result.model_free_summary
    classic = result.classic_summary
    table_width = 25 + 15 * 2

    print(f"\n{'=' * table_width}")
    print(f"MODEL-FREE vs CLASSIC PID - {mf.scenario_name}")
    print(f"{'=' * table_width}")
    print(f"{'Metric':<25}{MODE_MODEL_FREE:>15}{MODE_CLASSIC_PID:>15}")
    print("-" * table_width)
    print(f"{'Seed':<25}{mf.seed:>15}{classic.seed:>15}")
    for label in mf.rmse:
        print(f"{'RMSE ' + label:<25}{_fmt(mf.rmse[label]):>15}{_fmt(classic.rmse[label]):>15}")
    for label in mf.max_abs_u:
        print(
            f"{'max |' + label + '|':<25}{_fmt(mf.max_abs_u[label]):>15}"
            f"{_fmt(classic.max_abs_u[label]):>15}"
        )
    print(f"{'Diverged':<25}{str(mf.diverged):>15}{str(classic.diverged):>15}")


def _write_frame(frame: pd.DataFrame, path: PathLike, index: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=index, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def export_csv(series: TimeSeries, path: PathLike) -> Path:
    """Write the run log, one row per tick, 17 significant digits."""
    return _write_frame(series.to_frame(), path)


def comparison_frame(result: ComparisonResult) -> pd.DataFrame:
    """Summary table of a comparison, one row per metric, one column per mode."""
    mf = result.model_free_summary
    classic = result.classic_summary
    rows = {"seed": (mf.seed, classic.seed), "ticks": (mf.ticks, classic.ticks)}
    for label, pair in result.rmse_pair.items():
        rows[f"rmse_{label}"] = pair
    for label in mf.max_abs_u:
        rows[f"max_abs_{label}"] = (mf.max_abs_u[label], classic.max_abs_u[label])
    rows["diverged"] = (int(mf.diverged), int(classic.diverged))
    rows["divergence_time"] = (
        math.nan if mf.divergence_time is None else mf.divergence_time,
        math.nan if classic.divergence_time is None else classic.divergence_time,
    )
    frame = pd.DataFrame.from_dict(rows, orient="index", columns=[MODE_MODEL_FREE, MODE_CLASSIC_PID])
    frame.index.name = "metric"
    return frame


def export_comparison(result: ComparisonResult, output_dir: PathLike) -> Tuple[Path, Path, Path]:
    """Write model_free.csv, classic_pid.csv and summary.csv into output_dir."""
    output_path = Path(output_dir)
    output_path.mkdir(parents=True, exist_ok=True)
    mf_path = export_csv(result.model_free, output_path / f"{MODE_MODEL_FREE}.csv")
    classic_path = export_csv(result.classic, output_path / f"{MODE_CLASSIC_PID}.csv")
    summary_path = _write_frame(comparison_frame(result), output_path / "summary.csv", index=True)
    return mf_path, classic_path, summary_path


def export_kernel_csv(kernel: EstimatorKernel, path: PathLike) -> Path:
    """Kernel weights: one row per derivative order, one column per sample (oldest first)."""
    frame = pd.DataFrame(
        kernel.weights,
        columns=[f"w_{k}" for k in range(kernel.sample_count)],
    )
    frame.index.name = "order"
    return _write_frame(frame, path, index=True)


def export_estimator_trace(trace: pd.DataFrame, path: PathLike) -> Path:
    return _write_frame(trace, path)


def print_estimator_report(kernel: EstimatorKernel, errors: pd.DataFrame) -> None:
    """Print kernel parameters and per-order estimation errors."""
    spec = kernel.spec
    print(f"\n{'=' * 60}")
    print(
        f"Algebraic differentiator N={spec.taylor_order} nu={spec.integration_order} "
        f"T={kernel.window_length:g} s h={spec.sample_period:g} s ({kernel.sample_count} samples)"
    )
    print(f"{'=' * 60}")
    if errors.empty:
        print("No reference derivatives available for this signal.")
        return
    print(f"{'Order':<8}{'max |error|':>16}{'error var':>16}{'raw diff var':>16}")
    print("-" * 56)
    for _, row in errors.iterrows():
        print(
            f"{int(row['order']):<8}{_fmt(row['max_abs_error']):>16}"
            f"{_fmt(row['error_variance']):>16}{_fmt(row['raw_difference_variance']):>16}"
        )
