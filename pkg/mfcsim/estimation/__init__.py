"""Algebraic derivative estimation."""

from .buffer import AlgebraicEstimator, ChannelEstimate, SignalBuffer
from .diagnostics import (
    SyntheticSignal,
    estimator_trace,
    make_signal,
    monte_carlo_variance,
    trace_errors,
)
from .differentiator import (
    EstimatorKernel,
    EstimatorSpec,
    SignalWindow,
    build_kernel,
    denoise,
    estimate_at_now,
    estimate_at_origin,
    estimate_direct,
)

__all__ = [
    "AlgebraicEstimator",
    "ChannelEstimate",
    "SignalBuffer",
    "SyntheticSignal",
    "estimator_trace",
    "make_signal",
    "monte_carlo_variance",
    "trace_errors",
    "EstimatorKernel",
    "EstimatorSpec",
    "SignalWindow",
    "build_kernel",
    "denoise",
    "estimate_at_now",
    "estimate_at_origin",
    "estimate_direct",
]
