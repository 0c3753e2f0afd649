"""Three-tank benchmark: tanks 1 and 2 are fed by pumps, tank 3 sits between them.

Water flows 1 -> 3 -> 2 through pipes of section S_p (Torricelli law) and
leaves through the outlet of tank 2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ..config import (
    GRAVITY,
    LEVEL_CLAMP_TOLERANCE,
    PIPE_SECTION,
    TANK_INITIAL_LEVELS,
    TANK_SECTION,
    TANK_VISCOSITY,
)
from .base import Plant, PlantMetadata
from .integrate import rk4_step

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TankParameters:
    """Physical constants; section and pipe_section are areas in m^2."""

    section: float = TANK_SECTION
    pipe_section: float = PIPE_SECTION
    gravity: float = GRAVITY
    viscosity: Tuple[float, float, float] = TANK_VISCOSITY

    def __post_init__(self):
        if self.section <= 0 or self.pipe_section <= 0 or self.gravity <= 0:
            raise ValueError("tank section, pipe section and gravity must be positive")
        if len(self.viscosity) != 3 or any(mu <= 0 for mu in self.viscosity):
            raise ValueError(f"viscosity needs three positive coefficients, got {self.viscosity}")

    @property
    def coefficients(self) -> np.ndarray:
        """C_n = mu_n S_p sqrt(2 g) / S for n = 1, 2, 3."""
        return (
            np.asarray(self.viscosity, dtype=float)
            * self.pipe_section * math.sqrt(2 * self.gravity) / self.section
        )


DEFAULT_PARAMETERS = TankParameters()


def _signed_root(x):
    return np.sign(x) * np.sqrt(np.abs(x))


def three_tank_field(
    x: np.ndarray, u: np.ndarray, params: TankParameters = DEFAULT_PARAMETERS
) -> np.ndarray:
    """Level rates (m/s) for levels x (m) and pump flows u (m^3/s)."""
    c1, c2, c3 = params.coefficients
    q13 = c1 * _signed_root(x[0] - x[2])
    q32 = c3 * _signed_root(x[2] - x[1])
    q20 = c2 * _signed_root(x[1])
    return np.array([
        -q13 + u[0] / params.section,
        q32 - q20 + u[1] / params.section,
        q13 - q32,
    ])


def equilibrium_inputs(
    level_2: float, level_3: float, params: TankParameters = DEFAULT_PARAMETERS
) -> Tuple[np.ndarray, np.ndarray]:
    """Levels and constant pump flows that hold tanks 2 and 3 at the given levels.

    Returns (levels, u). Requires level_3 >= level_2 >= 0 and enough outflow
    from tank 2 for a nonnegative second pump flow.
    """
    if level_2 < 0 or level_3 < level_2:
        raise ValueError(
            f"equilibrium needs level_3 >= level_2 >= 0, got level_2={level_2}, level_3={level_3}"
        )
    c1, c2, c3 = params.coefficients
    level_1 = level_3 + (c3 / c1) ** 2 * (level_3 - level_2)
    u1 = params.section * c1 * math.sqrt(level_1 - level_3)
    u2 = params.section * (c2 * math.sqrt(level_2) - c3 * math.sqrt(level_3 - level_2))
    if u2 < 0:
        raise ValueError(
            f"no equilibrium with nonnegative pump flow at level_2={level_2}, level_3={level_3}"
        )
    return np.array([level_1, level_2, level_3]), np.array([u1, u2])


@dataclass(eq=False)
class ThreeTankPlant(Plant):
    """Three-tank simulator; all three levels are outputs, two pumps are inputs."""

    params: TankParameters = field(default_factory=TankParameters)
    initial_levels: Sequence[float] = TANK_INITIAL_LEVELS

    def __post_init__(self):
        self.initial_levels = np.asarray(self.initial_levels, dtype=float)
        if self.initial_levels.shape != (3,) or np.any(self.initial_levels < 0):
            raise ValueError(
                f"initial_levels must be three nonnegative levels, got {list(self.initial_levels)}"
            )
        self.levels = self.initial_levels.copy()
        self._metadata = PlantMetadata(
            n_inputs=2, n_outputs=3, output_orders=(1, 1, 1), input_nonlinear=False
        )

    @property
    def metadata(self) -> PlantMetadata:
        return self._metadata

    def rates(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return three_tank_field(x, u, self.params)

    def output(self, u: np.ndarray) -> np.ndarray:
        return self.levels.copy()

    def step(self, u: np.ndarray, dt: float) -> np.ndarray:
        if dt <= 0:
            raise ValueError(f"integration step must be positive, got {dt}")
        u = self._check_input(u)
        before = self.levels
        after = rk4_step(self.rates, before, u, dt)

        if logger.isEnabledFor(logging.DEBUG):
            for name, (i, j) in (("1-3", (0, 2)), ("3-2", (2, 1))):
                if np.sign(before[i] - before[j]) != np.sign(after[i] - after[j]):
                    logger.debug("flow direction %s changes sign", name)

        if np.any(after < 0):
            if np.any(after < -LEVEL_CLAMP_TOLERANCE):
                logger.warning("level below zero clamped: %s", after)
            else:
                logger.debug("level clamped at zero: %s", after)
            after = np.maximum(after, 0.0)
        self.levels = after
        return self.levels.copy()

    def reset(self) -> None:
        self.levels = self.initial_levels.copy()


def three_tank_step(plant: ThreeTankPlant, u: np.ndarray, dt: float) -> np.ndarray:
    """Advance the three-tank plant by one RK4 step and return the levels."""
    return plant.step(u, dt)
