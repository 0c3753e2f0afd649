"""Sliding sample buffers and the per-channel real-time estimator."""

import logging
from typing import NamedTuple

import numpy as np

from .differentiator import EstimatorKernel, SignalWindow, estimate_at_now

logger = logging.getLogger(__name__)


class SignalBuffer:
    """Fixed-capacity ring buffer of the most recent samples of one signal."""

    def __init__(self, capacity: int, sample_period: float):
        if capacity < 1:
            raise ValueError(f"buffer capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.sample_period = sample_period
        self._data = np.zeros(capacity)
        self._next = 0
        self._count = 0

    def push(self, value: float) -> None:
        self._data[self._next] = value
        self._next = (self._next + 1) % self.capacity
        self._count = min(self._count + 1, self.capacity)

    @property
    def is_full(self) -> bool:
        return self._count == self.capacity

    def __len__(self) -> int:
        return self._count

    def latest(self) -> float:
        if self._count == 0:
            raise ValueError("buffer is empty")
        return float(self._data[self._next - 1])

    def window(self) -> SignalWindow:
        """Buffered samples, oldest first."""
        if self.is_full:
            samples = np.roll(self._data, -self._next)
        else:
            samples = self._data[: self._count].copy()
        return SignalWindow(samples=samples, sample_period=self.sample_period)

    def clear(self) -> None:
        self._data[:] = 0.0
        self._next = 0
        self._count = 0


class ChannelEstimate(NamedTuple):
    """Output of one estimator update.

    derivatives[i] is the i-th derivative estimate at the newest sample for
    i = 0..N; derivatives[0] equals denoised once the window is full.
    """

    denoised: float
    derivatives: np.ndarray
    ready: bool

    def derivative(self, order: int) -> float:
        if order >= len(self.derivatives):
            raise ValueError(
                f"derivative of order {order} requested from an estimator of order "
                f"{len(self.derivatives) - 1}"
            )
        return float(self.derivatives[order])


class AlgebraicEstimator:
    """Real-time differentiator for one measured output.

    Until the buffer holds a full window the estimate is the latest raw sample
    with zero derivatives.
    """

    def __init__(self, kernel: EstimatorKernel, name: str = ""):
        self.kernel = kernel
        self.name = name
        self.buffer = SignalBuffer(kernel.sample_count, kernel.sample_period)

    @property
    def warmup_samples(self) -> int:
        return self.kernel.sample_count

    @property
    def taylor_order(self) -> int:
        return self.kernel.taylor_order

    def update(self, sample: float) -> ChannelEstimate:
        was_full = self.buffer.is_full
        self.buffer.push(sample)
        if not self.buffer.is_full:
            derivatives = np.zeros(self.kernel.taylor_order + 1)
            derivatives[0] = sample
            return ChannelEstimate(denoised=float(sample), derivatives=derivatives, ready=False)
        if not was_full:
            logger.info("estimator %s warm-up complete after %d samples", self.name, len(self.buffer))
        derivatives = estimate_at_now(self.kernel, self.buffer.window())
        return ChannelEstimate(denoised=float(derivatives[0]), derivatives=derivatives, ready=True)

    def reset(self) -> None:
        self.buffer.clear()
