"""Per-channel parameters of the ultra-local model and of its iPID controller."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np


@dataclass
class UltraLocalChannel:
    """Ultra-local model y_j^(n_j) = F_j + sum_i alpha_i u_i + beta_j of one output.

    output and input are 0-based plant indices; input is the control this
    channel computes in the decoupled law.
    """

    output: int
    input: int
    order: int  # n_j, usually 1 or 2
    alpha: np.ndarray  # one gain per plant input
    beta: float = 0.0

    # Latest estimate of F_j
    last_F: float = field(default=0.0, repr=False)

    def __post_init__(self) -> None:
        self.alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        if self.order < 1:
            raise ValueError(f"channel order n_j must be >= 1, got {self.order}")
        if not 0 <= self.input < self.alpha.size:
            raise ValueError(
                f"channel input index {self.input + 1} is outside the {self.alpha.size} alpha gains"
            )
        if not np.any(self.alpha):
            raise ValueError(
                f"channel for output {self.output + 1} has all alpha gains zero (no control authority)"
            )

    @property
    def alpha_gain(self) -> float:
        """alpha_{j,j}, the gain of the input this channel drives."""
        return float(self.alpha[self.input])

    @property
    def is_decoupled(self) -> bool:
        others = np.delete(self.alpha, self.input)
        return not np.any(others)

    def reset(self) -> None:
        self.last_F = 0.0

    def to_dict(self) -> dict:
        return {
            "output": self.output,
            "input": self.input,
            "order": self.order,
            "alpha": self.alpha.tolist(),
            "beta": self.beta,
        }


@dataclass(frozen=True)
class SquareSelection:
    """The m plant outputs kept as controlled outputs, in channel order."""

    selected_outputs: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "selected_outputs", tuple(int(i) for i in self.selected_outputs))

    def __len__(self) -> int:
        return len(self.selected_outputs)


@dataclass(frozen=True)
class PidGains:
    """Gains K_P, K_I, K_D of the correction term."""

    kp: float
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self) -> None:
        if min(self.kp, self.ki, self.kd) < 0:
            raise ValueError(
                f"PID gains must be nonnegative, got kp={self.kp}, ki={self.ki}, kd={self.kd}"
            )
        if self.kp <= 0:
            raise ValueError(f"kp must be positive for a live channel, got {self.kp}")

    def to_dict(self) -> dict:
        return {"kp": self.kp, "ki": self.ki, "kd": self.kd}


@dataclass
class ChannelControllerState:
    """Memory of one iPID channel between control periods."""

    gains: PidGains
    u_min: Optional[float] = None
    u_max: Optional[float] = None
    integral_e: float = 0.0
    last_u: float = 0.0

    # Error of the previous step, None right after a reset
    last_e: Optional[float] = field(default=None, repr=False)
    saturated_steps: int = field(default=0, repr=False)

    def __post_init__(self) -> None:
        if self.u_min is not None and self.u_max is not None and not self.u_min < self.u_max:
            raise ValueError(f"u_min ({self.u_min}) must be below u_max ({self.u_max})")

    def clamp(self, u: float) -> float:
        if self.u_min is not None and u < self.u_min:
            return self.u_min
        if self.u_max is not None and u > self.u_max:
            return self.u_max
        return u


def decoupled_alpha(n_inputs: int, input: int, gain: float) -> np.ndarray:
    """Alpha row with a single nonzero gain on the given input."""
    alpha = np.zeros(n_inputs)
    alpha[input] = gain
    return alpha


def as_alpha_row(value, n_inputs: int, input: int) -> np.ndarray:
    """Scalar gain (decoupled) or full row of n_inputs gains."""
    if np.isscalar(value):
        return decoupled_alpha(n_inputs, input, float(value))
    row = np.asarray(value, dtype=float)
    if row.shape != (n_inputs,):
        raise ValueError(f"alpha must be a scalar or a list of {n_inputs} gains, got {list(row)}")
    return row
