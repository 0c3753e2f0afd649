"""Offline diagnostics for algebraic differentiators.

Synthetic test signals, true-vs-estimated derivative traces and Monte-Carlo
noise studies, used by the ``estimator`` CLI command and the test suite.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view
from numpy.polynomial import Polynomial

from .differentiator import EstimatorKernel

logger = logging.getLogger(__name__)

SIGNAL_KINDS = ("polynomial", "sine", "csv")


@dataclass
class SyntheticSignal:
    """Sampled test signal with its exact derivatives when known.

    derivatives has shape (len(times), max_order + 1); it is None for signals
    read from a file.
    """

    kind: str
    times: np.ndarray
    values: np.ndarray
    derivatives: Optional[np.ndarray] = None

    @property
    def sample_period(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def _parse_floats(text: str, kind: str) -> list:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"{kind} signal parameters must be comma-separated numbers, got '{text}'")


def make_signal(
    signal_spec: str, duration: float, sample_period: float, max_order: int
) -> SyntheticSignal:
    """Build a test signal from a ``kind:params`` string.

    Kinds:
        polynomial:c0,c1,...   sum of c_k t^k
        sine:amplitude,freq    amplitude * sin(2 pi freq t), freq in Hz
        csv:path[:column]      samples read from a CSV file (column 't' is used
                               as the time axis when present)
    """
    kind, _, params = signal_spec.partition(":")
    kind = kind.strip().lower()
    if kind not in SIGNAL_KINDS:
        raise ValueError(f"unknown signal kind '{kind}'; expected one of {', '.join(SIGNAL_KINDS)}")
    if duration <= 0 or sample_period <= 0:
        raise ValueError("signal duration and sample period must be positive")

    if kind == "csv":
        return _read_csv_signal(params, sample_period)

    times = np.arange(int(round(duration / sample_period)) + 1) * sample_period
    derivatives = np.zeros((len(times), max_order + 1))
    if kind == "polynomial":
        coeffs = _parse_floats(params, kind) or [0.0]
        poly = Polynomial(coeffs)
        for order in range(max_order + 1):
            derivatives[:, order] = poly.deriv(order)(times)
    else:
        values = _parse_floats(params, kind)
        if len(values) != 2:
            raise ValueError(f"sine signal needs 'amplitude,frequency', got '{params}'")
        amplitude, frequency = values
        omega = 2 * math.pi * frequency
        for order in range(max_order + 1):
            derivatives[:, order] = amplitude * omega ** order * np.sin(omega * times + order * math.pi / 2)
    return SyntheticSignal(kind=kind, times=times, values=derivatives[:, 0].copy(), derivatives=derivatives)


def _read_csv_signal(params: str, sample_period: float) -> SyntheticSignal:
    path_text, _, column = params.partition(":")
    path = Path(path_text)
    if not path.exists():
        raise ValueError(f"signal file not found: {path}")
    frame = pd.read_csv(path)
    value_columns = [name for name in frame.columns if name != "t"]
    if column:
        if column not in frame.columns:
            raise ValueError(f"column '{column}' not in {path} (columns: {', '.join(frame.columns)})")
    elif value_columns:
        column = value_columns[0]
    else:
        raise ValueError(f"{path} has no signal column")
    values = frame[column].to_numpy(dtype=float)
    if "t" in frame.columns:
        times = frame["t"].to_numpy(dtype=float)
        steps = np.diff(times)
        if len(steps) and not np.allclose(steps, sample_period, rtol=1e-6):
            raise ValueError(
                f"{path} is not sampled uniformly at h={sample_period}"
            )
    else:
        times = np.arange(len(values)) * sample_period
    return SyntheticSignal(kind="csv", times=times, values=values)


def _now_weights(kernel: EstimatorKernel) -> np.ndarray:
    """Kernel rows that apply directly to windows ordered oldest first."""
    signs = (-1.0) ** np.arange(kernel.taylor_order + 1)
    return kernel.weights[:, ::-1] * signs[:, None]


def estimator_trace(
    kernel: EstimatorKernel,
    signal: SyntheticSignal,
    noise_std: float = 0.0,
    seed: Optional[int] = None,
) -> pd.DataFrame:
    """Slide the kernel over a signal and tabulate the estimates at each window end.

    Columns: t, x, x_meas, then est_i (and true_i when known) for i = 0..N.
    Rows start at the first full window.
    """
    measured = signal.values.astype(float)
    if noise_std > 0:
        rng = np.random.default_rng(seed)
        measured = measured + rng.normal(0.0, noise_std, size=measured.shape)
    m = kernel.sample_count
    if len(measured) < m:
        raise ValueError(
            f"signal has {len(measured)} samples, shorter than the {m}-sample window"
        )
    windows = sliding_window_view(measured, m)
    estimates = windows @ _now_weights(kernel).T
    start = m - 1

    data: Dict[str, np.ndarray] = {
        "t": signal.times[start:],
        "x": signal.values[start:],
        "x_meas": measured[start:],
    }
    for order in range(kernel.taylor_order + 1):
        data[f"est_{order}"] = estimates[:, order]
        if signal.derivatives is not None and order < signal.derivatives.shape[1]:
            data[f"true_{order}"] = signal.derivatives[start:, order]
    return pd.DataFrame(data)


def trace_errors(trace: pd.DataFrame, sample_period: float) -> pd.DataFrame:
    """Per-order error statistics of a trace with known true derivatives.

    The raw_difference_variance column holds, for order 1, the error variance
    of the backward difference of the measured samples, the naive alternative
    to the kernel.
    """
    rows = []
    order = 0
    while f"est_{order}" in trace.columns:
        if f"true_{order}" in trace.columns:
            error = trace[f"est_{order}"] - trace[f"true_{order}"]
            row = {
                "order": order,
                "max_abs_error": float(error.abs().max()),
                "error_variance": float(error.var(ddof=1)) if len(error) > 1 else 0.0,
                "raw_difference_variance": math.nan,
            }
            if order == 1 and len(trace) > 2:
                raw = trace["x_meas"].diff() / sample_period - trace["true_1"]
                row["raw_difference_variance"] = float(raw.iloc[1:].var(ddof=1))
            rows.append(row)
        order += 1
    return pd.DataFrame(rows, columns=["order", "max_abs_error", "error_variance", "raw_difference_variance"])


def monte_carlo_variance(
    kernel: EstimatorKernel,
    sigma: float,
    trials: int,
    seed: Optional[int] = None,
    level: float = 0.0,
) -> np.ndarray:
    """Sample variance of each estimate at the window end under white noise.

    Every trial is a constant window at ``level`` plus independent N(0, sigma^2)
    samples. Returns one variance per derivative order.
    """
    if trials < 2:
        raise ValueError(f"need at least 2 trials, got {trials}")
    rng = np.random.default_rng(seed)
    windows = level + rng.normal(0.0, sigma, size=(trials, kernel.sample_count))
    estimates = windows @ _now_weights(kernel).T
    variances = estimates.var(axis=0, ddof=1)
    logger.debug("monte carlo over %d trials: variances %s", trials, variances)
    return variances
