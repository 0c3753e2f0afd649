"""Ultra-local model identification and intelligent PID control."""

from .ipid import compute_control, reset
from .ultra_local import check_square_selection, estimate_F, validate_channel

__all__ = [
    "compute_control",
    "reset",
    "check_square_selection",
    "estimate_F",
    "validate_channel",
]
