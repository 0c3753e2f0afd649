"""Closed-loop scenario: plant, channels, references and simulation settings."""

import dataclasses
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..config import (
    DIVERGENCE_THRESHOLD,
    DEFAULT_SEED,
    MODE_MODEL_FREE,
    MODES,
    PLANT_LINEAR,
    PLANT_TYPES,
    RK4_SUBSTEPS,
    TANK_INITIAL_LEVELS,
)
from ..estimation.differentiator import EstimatorSpec
from ..plants.linear import TransferEntry
from ..plants.three_tank import TankParameters
from .channel import PidGains, SquareSelection, UltraLocalChannel
from .trajectory import ReferenceProfile


@dataclass
class PlantConfig:
    """Plant selection and parameters.

    Linear plants use entries, n_outputs, n_inputs and cancel_common_factors;
    the three-tank plant uses tank and initial_levels.
    """

    type: str
    entries: List[TransferEntry] = field(default_factory=list)
    n_outputs: int = 0
    n_inputs: int = 0
    cancel_common_factors: bool = False
    tank: TankParameters = field(default_factory=TankParameters)
    initial_levels: Tuple[float, ...] = TANK_INITIAL_LEVELS

    def __post_init__(self) -> None:
        if self.type not in PLANT_TYPES:
            raise ValueError(
                f"plant.type must be one of {', '.join(sorted(PLANT_TYPES))}, got '{self.type}'"
            )

    @property
    def output_count(self) -> int:
        return self.n_outputs if self.type == PLANT_LINEAR else 3

    @property
    def input_count(self) -> int:
        return self.n_inputs if self.type == PLANT_LINEAR else 2


@dataclass
class ChannelConfig:
    """Everything one controlled output needs: model, gains, bounds, estimator, reference."""

    channel: UltraLocalChannel
    gains: PidGains
    estimator: EstimatorSpec
    reference: ReferenceProfile
    u_min: Optional[float] = None
    u_max: Optional[float] = None

    def __post_init__(self) -> None:
        if self.estimator.taylor_order < self.channel.order:
            raise ValueError(
                f"estimator taylor_order {self.estimator.taylor_order} cannot provide the "
                f"order-{self.channel.order} derivative of output {self.channel.output + 1}"
            )
        if self.reference.smoothness < self.channel.order:
            raise ValueError(
                f"reference of output {self.channel.output + 1} has smoothness "
                f"{self.reference.smoothness}, below the channel order {self.channel.order}"
            )
        if self.u_min is not None and self.u_max is not None and not self.u_min < self.u_max:
            raise ValueError(f"u_min ({self.u_min}) must be below u_max ({self.u_max})")


@dataclass
class Scenario:
    """Full closed-loop configuration."""

    name: str
    plant: PlantConfig
    channels: List[ChannelConfig]
    period: float  # control period h, s
    duration: float  # s
    noise_std: np.ndarray  # one std per plant output
    seed: int = DEFAULT_SEED
    mode: str = MODE_MODEL_FREE
    substeps: int = RK4_SUBSTEPS
    divergence_threshold: float = DIVERGENCE_THRESHOLD

    def __post_init__(self) -> None:
        self.noise_std = np.broadcast_to(
            np.asarray(self.noise_std, dtype=float), (self.plant.output_count,)
        ).copy()
        if self.period <= 0:
            raise ValueError(f"sim.period must be positive, got {self.period}")
        if self.mode not in MODES:
            raise ValueError(f"sim.mode must be one of {', '.join(sorted(MODES))}, got '{self.mode}'")
        if self.substeps < 1:
            raise ValueError(f"sim.substeps must be >= 1, got {self.substeps}")
        if np.any(self.noise_std < 0):
            raise ValueError("noise std must be nonnegative")
        if not self.channels:
            raise ValueError("scenario needs at least one channel")
        if len(self.channels) != self.plant.input_count:
            raise ValueError(
                f"square configuration needs one channel per plant input: "
                f"{len(self.channels)} channels for {self.plant.input_count} inputs"
            )
        for config in self.channels:
            if abs(config.estimator.sample_period - self.period) > 1e-12 * self.period:
                raise ValueError(
                    f"estimator of output {config.channel.output + 1} samples every "
                    f"{config.estimator.sample_period} s but the control period is {self.period} s"
                )
        if not self.duration > self.warmup_time:
            raise ValueError(
                f"sim.duration {self.duration} s must exceed the estimator warm-up of {self.warmup_time} s"
            )

    @property
    def selection(self) -> SquareSelection:
        return SquareSelection(tuple(c.channel.output for c in self.channels))

    @property
    def n_ticks(self) -> int:
        return int(round(self.duration / self.period)) + 1

    @property
    def warmup_ticks(self) -> int:
        """Ticks before every estimator window is full."""
        return max(c.estimator.sample_count for c in self.channels) - 1

    @property
    def warmup_time(self) -> float:
        return self.warmup_ticks * self.period

    def with_mode(self, mode: str) -> "Scenario":
        return dataclasses.replace(self, mode=mode)

    def with_seed(self, seed: int) -> "Scenario":
        return dataclasses.replace(self, seed=seed)

    def to_dict(self) -> dict:
        """Summary of the resolved settings for reports."""
        return {
            "name": self.name,
            "plant": self.plant.type,
            "channels": [
                {
                    **c.channel.to_dict(),
                    **c.gains.to_dict(),
                    "u_min": c.u_min,
                    "u_max": c.u_max,
                    "taylor_order": c.estimator.taylor_order,
                    "integration_order": c.estimator.integration_order,
                    "window": c.estimator.effective_window,
                }
                for c in self.channels
            ],
            "period": self.period,
            "duration": self.duration,
            "noise_std": self.noise_std.tolist(),
            "seed": self.seed,
            "mode": self.mode,
        }
