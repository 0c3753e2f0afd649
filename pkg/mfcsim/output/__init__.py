"""Output package."""

from .reporter import (
    comparison_frame,
    export_comparison,
    export_csv,
    export_estimator_trace,
    export_kernel_csv,
    print_comparison,
    print_estimator_report,
    print_run_summary,
)
from .results import ComparisonResult, RunSummary, TimeSeries

__all__ = [
    "comparison_frame",
    "ComparisonResult",
    "RunSummary",
    "TimeSeries",
    "export_comparison",
    "export_csv",
    "export_estimator_trace",
    "export_kernel_csv",
    "print_comparison",
    "print_estimator_report",
    "print_run_summary",
]
