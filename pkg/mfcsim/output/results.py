"""Result containers for closed-loop runs."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..config import CHANNEL_COLUMNS, SECOND_DERIVATIVE_COLUMN


def channel_columns(output: int, order: int) -> List[str]:
    """Logged columns of the channel controlling the 1-based output."""
    names = [f"{name}_{output}" for name in CHANNEL_COLUMNS]
    if order >= 2:
        names.append(f"{SECOND_DERIVATIVE_COLUMN}_{output}")
    return names


def series_columns(outputs: List[int], orders: List[int], n_inputs: int) -> List[str]:
    """Full column list: t, channel blocks in channel order, then u_1..u_m."""
    columns = ["t"]
    for output, order in zip(outputs, orders):
        columns.extend(channel_columns(output, order))
    columns.extend(f"u_{i}" for i in range(1, n_inputs + 1))
    return columns


@dataclass
class TimeSeries:
    """Per-tick log of one closed-loop run on a uniform grid of period h.

    outputs holds the 1-based plant output of each channel, in channel order.
    """

    scenario_name: str
    mode: str
    seed: int
    period: float
    outputs: List[int]
    orders: List[int]
    n_inputs: int
    warmup_ticks: int
    columns: List[str] = field(default_factory=list)
    rows: List[List[float]] = field(default_factory=list, repr=False)

    # Divergence report
    diverged: bool = False
    divergence_reason: Optional[str] = None
    divergence_tick: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.columns:
            self.columns = series_columns(self.outputs, self.orders, self.n_inputs)

    def append(self, row: List[float]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values for {len(self.columns)} columns")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def divergence_time(self) -> Optional[float]:
        if self.divergence_tick is None:
            return None
        return self.divergence_tick * self.period

    def to_frame(self) -> pd.DataFrame:
        if not self.rows:
            return pd.DataFrame({name: pd.Series(dtype=float) for name in self.columns})
        return pd.DataFrame(np.array(self.rows, dtype=float), columns=self.columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"no column '{name}' (columns: {', '.join(self.columns)})")
        index = self.columns.index(name)
        return np.array([row[index] for row in self.rows], dtype=float)

    def noise(self, output: int) -> np.ndarray:
        """Measurement noise added to a 1-based output, y_meas - y_true."""
        return self.column(f"y_meas_{output}") - self.column(f"y_true_{output}")


@dataclass
class RunSummary:
    """Headline numbers of one run."""

    scenario_name: str
    mode: str
    seed: int
    ticks: int
    rmse: Dict[str, float]  # keyed by output label, e.g. "y_1"
    reference_span: Dict[str, float]
    max_abs_u: Dict[str, float]  # keyed by input label, e.g. "u_1"
    diverged: bool
    divergence_reason: Optional[str] = None
    divergence_time: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario_name,
            "mode": self.mode,
            "seed": self.seed,
            "ticks": self.ticks,
            "rmse": self.rmse,
            "reference_span": self.reference_span,
            "max_abs_u": self.max_abs_u,
            "diverged": self.diverged,
            "divergence_reason": self.divergence_reason,
            "divergence_time": self.divergence_time,
        }


@dataclass
class ComparisonResult:
    """Model-free run against the same loop with F forced to zero."""

    model_free: TimeSeries
    classic: TimeSeries
    model_free_summary: RunSummary
    classic_summary: RunSummary

    @property
    def rmse_pair(self) -> Dict[str, tuple]:
        """(model_free, classic) RMSE per output label."""
        return {
            label: (self.model_free_summary.rmse[label], self.classic_summary.rmse[label])
            for label in self.model_free_summary.rmse
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model_free": self.model_free_summary.to_dict(),
            "classic_pid": self.classic_summary.to_dict(),
        }
