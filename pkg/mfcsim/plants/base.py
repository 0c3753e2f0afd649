"""Common interface of the simulated plants."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class PlantMetadata:
    """Input-output structure a plant declares to the controller configuration.

    output_orders[j] is the differential order of output j with respect to the
    inputs; input_nonlinear is set when u does not enter the dynamics linearly.
    """

    n_inputs: int
    n_outputs: int
    output_orders: Tuple[int, ...]
    input_nonlinear: bool = False

    def to_dict(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "n_outputs": self.n_outputs,
            "output_orders": list(self.output_orders),
            "input_nonlinear": self.input_nonlinear,
        }


class Plant(ABC):
    """Continuous-time ground truth stepped by the simulation loop."""

    @property
    @abstractmethod
    def metadata(self) -> PlantMetadata:
        ...

    @abstractmethod
    def output(self, u: np.ndarray) -> np.ndarray:
        """Current outputs, with u the control being applied (direct feedthrough)."""

    @abstractmethod
    def step(self, u: np.ndarray, dt: float) -> np.ndarray:
        """Advance by one RK4 step of length dt holding u; return the new outputs."""

    @abstractmethod
    def reset(self) -> None:
        """Return to the initial state."""

    def _check_input(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.metadata.n_inputs,):
            raise ValueError(
                f"expected {self.metadata.n_inputs} inputs, got array of shape {u.shape}"
            )
        return u
