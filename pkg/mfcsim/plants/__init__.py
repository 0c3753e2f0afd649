"""Ground-truth plant simulators."""

from .base import Plant, PlantMetadata
from .integrate import rk4_linear_map, rk4_step
from .linear import (
    LinearMimoPlant,
    StateSpace,
    TransferEntry,
    frequency_response,
    linear_step,
    realize_tf,
)
from .three_tank import (
    TankParameters,
    ThreeTankPlant,
    equilibrium_inputs,
    three_tank_field,
    three_tank_step,
)

__all__ = [
    "Plant",
    "PlantMetadata",
    "rk4_step",
    "rk4_linear_map",
    "LinearMimoPlant",
    "StateSpace",
    "TransferEntry",
    "frequency_response",
    "linear_step",
    "realize_tf",
    "TankParameters",
    "ThreeTankPlant",
    "equilibrium_inputs",
    "three_tank_field",
    "three_tank_step",
]
