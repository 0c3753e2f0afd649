"""Data loading package."""

from .loader import (
    apply_overrides,
    build_plant,
    load_canned_scenario,
    load_scenario,
    scenario_from_dict,
)

__all__ = [
    "apply_overrides",
    "build_plant",
    "load_canned_scenario",
    "load_scenario",
    "scenario_from_dict",
]
