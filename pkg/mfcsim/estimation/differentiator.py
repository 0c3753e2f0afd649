"""Algebraic estimation of the derivatives of a noisy sampled signal.

On a window of length T the truncated Taylor expansion x_N of the signal
satisfies, for m = 0..N and nu >= N + 1,

    s^-nu d^m/ds^m { x^(N)(0) + x^(N-1)(0) s + ... + x(0) s^N }
        = s^-nu d^m/ds^m { s^(N+1) x }

Back in the time domain every term of the left side is c t^(a-1)/(a-1)! and
every term s^-a d^n x/ds^n of the right side is the weighted integral

    (-1)^n / (a-1)! * int_0^T (T - tau)^(a-1) tau^n x(tau) dtau

so each right side is a linear functional of the window samples. The system is
triangular, and solving it once against all sample functionals gives one FIR
row per derivative order (the kernel).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

import numpy as np

from ..config import (
    INTEGRATION_ORDER_OFFSET,
    KERNEL_CONDITION_LIMIT,
    STEP_TOLERANCE,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorSpec:
    """Parameters of one algebraic differentiator.

    taylor_order is N, integration_order is nu, window_length is T (s) and
    sample_period is h (s).
    """

    taylor_order: int
    integration_order: int
    window_length: float
    sample_period: float

    @classmethod
    def with_default_integration(
        cls, taylor_order: int, window_length: float, sample_period: float
    ) -> "EstimatorSpec":
        """Spec with nu = N + 2."""
        return cls(
            taylor_order=taylor_order,
            integration_order=taylor_order + INTEGRATION_ORDER_OFFSET,
            window_length=window_length,
            sample_period=sample_period,
        )

    @property
    def sample_count(self) -> int:
        """Number of samples M in the window."""
        return int(round(self.window_length / self.sample_period)) + 1

    @property
    def effective_window(self) -> float:
        """Window length actually covered by the samples, (M - 1) h."""
        return (self.sample_count - 1) * self.sample_period

    def validate(self) -> None:
        """Raise ValueError if these settings cannot produce a kernel."""
        if not isinstance(self.taylor_order, (int, np.integer)) or self.taylor_order < 0:
            raise ValueError(
                f"taylor_order must be a nonnegative integer, got {self.taylor_order!r}"
            )
        if not isinstance(self.integration_order, (int, np.integer)):
            raise ValueError(
                f"integration_order must be an integer, got {self.integration_order!r}"
            )
        if self.integration_order < self.taylor_order + 1:
            raise ValueError(
                f"integration_order {self.integration_order} must be >= taylor_order + 1 "
                f"({self.taylor_order + 1})"
            )
        if not self.window_length > 0:
            raise ValueError(f"window_length must be positive, got {self.window_length}")
        if not self.sample_period > 0:
            raise ValueError(f"sample_period must be positive, got {self.sample_period}")
        if self.sample_count < self.taylor_order + 2:
            raise ValueError(
                f"window of {self.sample_count} samples is too short for taylor_order "
                f"{self.taylor_order}; need at least {self.taylor_order + 2} "
                f"(increase window_length or decrease sample_period)"
            )


@dataclass(frozen=True, eq=False)
class EstimatorKernel:
    """Precomputed FIR weights, one row per derivative order 0..N.

    Row i applied to the M window samples (oldest first) estimates the i-th
    derivative at the oldest sample, in signal units per s^i.
    """

    spec: EstimatorSpec
    weights: np.ndarray
    window_length: float = field(default=0.0)

    @property
    def taylor_order(self) -> int:
        return self.spec.taylor_order

    @property
    def sample_count(self) -> int:
        return self.weights.shape[1]

    @property
    def sample_period(self) -> float:
        return self.spec.sample_period


@dataclass
class SignalWindow:
    """M consecutive samples of a signal, most recent last."""

    samples: np.ndarray
    sample_period: float

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise ValueError(f"window samples must be one-dimensional, got shape {self.samples.shape}")

    def __len__(self) -> int:
        return self.samples.shape[0]


@lru_cache(maxsize=64)
def _unit_system(taylor_order: int, integration_order: int, sample_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Operational system on the unit window [0, 1] with M uniform samples.

    Returns (L, R): L[m, i] multiplies the scaled unknown T^i x^(i)(0) in
    equation m, R[m, :] is the quadrature functional of the right side. The
    system for a window of length T is the same after substituting tau = T theta,
    so it only depends on (N, nu, M).
    """
    n, nu, m_count = taylor_order, integration_order, sample_count
    step = 1.0 / (m_count - 1)
    theta = np.linspace(0.0, 1.0, m_count)
    trapezoid = np.full(m_count, step)
    trapezoid[0] = trapezoid[-1] = step / 2

    lhs = np.zeros((n + 1, n + 1))
    rhs = np.zeros((n + 1, m_count))
    for m in range(n + 1):
        for i in range(n - m + 1):
            a = nu + m + i - n
            lhs[m, i] = math.factorial(n - i) / math.factorial(n - i - m) / math.factorial(a - 1)
        for k in range(m + 1):
            coef = math.comb(m, k) * math.factorial(n + 1) / math.factorial(n + 1 - m + k)
            a = nu - n - 1 + m - k
            sign = (-1.0) ** k
            if a == 0:
                # no integration left: s^0 d^k x/ds^k is (-t)^k x(t) at the window end
                rhs[m, -1] += coef * sign
            else:
                rhs[m] += (
                    coef * sign / math.factorial(a - 1)
                    * (1.0 - theta) ** (a - 1) * theta ** k * trapezoid
                )

    _correct_quadrature(lhs, rhs, theta)
    lhs.setflags(write=False)
    rhs.setflags(write=False)
    return lhs, rhs


def _correct_quadrature(lhs: np.ndarray, rhs: np.ndarray, theta: np.ndarray) -> None:
    """Make every quadrature functional exact on polynomials of degree <= N.

    For x = theta^k the unknowns are k! delta_ik, so functional m must return
    lhs[m, k] * k!. The trapezoid residue is removed with the smallest
    correction weighted by the trapezoid weights themselves (zero weights stay
    zero, single-signed rows stay single-signed).
    """
    n = lhs.shape[0] - 1
    vander = np.vander(theta, n + 1, increasing=True)
    exact = lhs * np.array([math.factorial(k) for k in range(n + 1)])
    for m in range(n + 1):
        residual = exact[m] - rhs[m] @ vander
        if not np.any(residual):
            continue
        g = np.abs(rhs[m])
        gram = vander.T @ (g[:, None] * vander)
        lam = np.linalg.lstsq(gram, residual, rcond=None)[0]
        rhs[m] += g * (vander @ lam)


def _scale(taylor_order: int, window_length: float) -> np.ndarray:
    """Per-order factors T^-i turning scaled unknowns into derivatives."""
    return window_length ** -np.arange(taylor_order + 1, dtype=float)


def _checked_system(spec: EstimatorSpec) -> Tuple[np.ndarray, np.ndarray]:
    spec.validate()
    lhs, rhs = _unit_system(int(spec.taylor_order), int(spec.integration_order), spec.sample_count)
    cond = np.linalg.cond(lhs)
    if not np.isfinite(cond) or cond > KERNEL_CONDITION_LIMIT:
        raise ValueError(
            f"estimator system is numerically singular (condition {cond:.3g}) for "
            f"N={spec.taylor_order}, nu={spec.integration_order}, "
            f"T={spec.window_length}, h={spec.sample_period}"
        )
    return lhs, rhs


def build_kernel(spec: EstimatorSpec) -> EstimatorKernel:
    """Assemble and solve the operational system into FIR weights.

    Raises:
        ValueError: if nu < N + 1, the window has fewer than N + 2 samples or
            the system is numerically singular.
    """
    lhs, rhs = _checked_system(spec)

    ratio = spec.window_length / spec.sample_period
    if abs(ratio - round(ratio)) > STEP_TOLERANCE * ratio:
        logger.info(
            "window %.6g s is not a multiple of h=%.6g s; using T=%.6g s (%d samples)",
            spec.window_length, spec.sample_period, spec.effective_window, spec.sample_count,
        )

    window = spec.effective_window
    weights = np.linalg.solve(lhs, rhs) * _scale(spec.taylor_order, window)[:, None]
    if not np.all(np.isfinite(weights)):
        raise ValueError(
            f"estimator weights are not finite for N={spec.taylor_order}, "
            f"nu={spec.integration_order}, T={spec.window_length}, h={spec.sample_period}"
        )
    weights.setflags(write=False)
    logger.debug(
        "built kernel N=%d nu=%d M=%d T=%.6g",
        spec.taylor_order, spec.integration_order, spec.sample_count, window,
    )
    return EstimatorKernel(spec=spec, weights=weights, window_length=window)


def _check_window(kernel: EstimatorKernel, window: SignalWindow) -> None:
    if len(window) != kernel.sample_count:
        raise ValueError(
            f"window has {len(window)} samples but the kernel expects {kernel.sample_count}"
        )
    if not math.isclose(window.sample_period, kernel.sample_period, rel_tol=STEP_TOLERANCE):
        raise ValueError(
            f"window sample period {window.sample_period} does not match the kernel's "
            f"{kernel.sample_period}"
        )


def estimate_at_origin(kernel: EstimatorKernel, window: SignalWindow) -> np.ndarray:
    """Derivatives 0..N at the oldest sample of the window."""
    _check_window(kernel, window)
    return kernel.weights @ window.samples


def estimate_at_now(kernel: EstimatorKernel, window: SignalWindow) -> np.ndarray:
    """Derivatives 0..N at the newest sample of the window.

    The reversed window is a signal running backwards from now, so its
    derivatives at the origin are (-1)^i x^(i)(now).
    """
    _check_window(kernel, window)
    estimates = kernel.weights @ window.samples[::-1]
    estimates[1::2] *= -1.0
    return estimates


def denoise(kernel: EstimatorKernel, window: SignalWindow) -> float:
    """Order-0 estimate at the newest sample (low-pass filtered value)."""
    return float(estimate_at_now(kernel, window)[0])


def estimate_direct(spec: EstimatorSpec, window: SignalWindow) -> np.ndarray:
    """Derivatives at the window origin by solving the system for this window.

    Same result as applying build_kernel(spec), without forming the kernel.
    """
    lhs, rhs = _checked_system(spec)
    if len(window) != spec.sample_count:
        raise ValueError(
            f"window has {len(window)} samples but the estimator expects {spec.sample_count}"
        )
    scaled = np.linalg.solve(lhs, rhs @ window.samples)
    return scaled * _scale(spec.taylor_order, spec.effective_window)
