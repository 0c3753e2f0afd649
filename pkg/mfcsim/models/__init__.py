"""Models package."""

from .channel import ChannelControllerState, PidGains, SquareSelection, UltraLocalChannel
from .scenario import ChannelConfig, PlantConfig, Scenario
from .trajectory import ReferenceProfile, Segment, smoothstep

__all__ = [
    "ChannelControllerState",
    "PidGains",
    "SquareSelection",
    "UltraLocalChannel",
    "ChannelConfig",
    "PlantConfig",
    "Scenario",
    "ReferenceProfile",
    "Segment",
    "smoothstep",
]
