"""Ultra-local model identification: the data-driven F_j estimate and channel checks."""

import logging
from typing import List, Optional

import numpy as np

from ..models.channel import SquareSelection, UltraLocalChannel
from ..plants.base import PlantMetadata

logger = logging.getLogger(__name__)


def estimate_F(channel: UltraLocalChannel, y_nj_estimate: float, u_prev: np.ndarray) -> float:
    """F_j = [y_j^(n_j)]_e - sum_i alpha_i u_i(k-1) - beta_j.

    u_prev must be the control held during the previous sampling interval.
    The result is stored as channel.last_F.
    """
    u_prev = np.asarray(u_prev, dtype=float)
    if u_prev.shape != channel.alpha.shape:
        raise ValueError(
            f"u_prev has shape {u_prev.shape} but the channel has {channel.alpha.size} alpha gains"
        )
    value = float(y_nj_estimate - channel.alpha @ u_prev - channel.beta)
    channel.last_F = value
    return value


def validate_channel(
    channel: UltraLocalChannel, plant_metadata: Optional[PlantMetadata]
) -> List[str]:
    """Advisory warnings for a channel against what the plant declares.

    Never raises; the controller is meant to work without a plant model.
    """
    if plant_metadata is None:
        return []
    warnings = []
    name = f"output {channel.output + 1}"
    if 0 <= channel.output < len(plant_metadata.output_orders):
        declared = plant_metadata.output_orders[channel.output]
        if channel.order > declared:
            warnings.append(
                f"{name}: channel order n={channel.order} exceeds the plant's declared order {declared}"
            )
    if channel.beta == 0 and plant_metadata.input_nonlinear:
        warnings.append(
            f"{name}: beta is 0 but the plant is flagged input-nonlinear; "
            f"a nonzero beta is advised when u does not enter linearly"
        )
    if channel.alpha.size != plant_metadata.n_inputs:
        warnings.append(
            f"{name}: {channel.alpha.size} alpha gains for {plant_metadata.n_inputs} plant inputs"
        )
    if not channel.is_decoupled:
        warnings.append(f"{name}: coupled alpha row; the control law uses only alpha_{{j,j}}")
    for message in warnings:
        logger.warning(message)
    return warnings


def check_square_selection(selection: SquareSelection, plant_metadata: PlantMetadata) -> None:
    """Raise ValueError unless the selection picks m distinct outputs of the plant."""
    outputs = selection.selected_outputs
    m, p = plant_metadata.n_inputs, plant_metadata.n_outputs
    if len(outputs) != m:
        raise ValueError(
            f"square configuration needs {m} controlled outputs (one per input), got {len(outputs)}"
        )
    if len(set(outputs)) != len(outputs):
        raise ValueError(f"controlled outputs must be distinct, got {[i + 1 for i in outputs]}")
    for index in outputs:
        if not 0 <= index < p:
            raise ValueError(f"output {index + 1} does not exist; the plant has {p} outputs")
    if p > m:
        logger.info(
            "controlling outputs %s of %d", ", ".join(str(i + 1) for i in outputs), p
        )
