"""Scenario loading: YAML/JSON documents, canned scenarios and overrides."""

import copy
import json
import logging
import math
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import yaml

from ..config import (
    ALPHA_LINEAR,
    ALPHA_THREE_TANK,
    CANNED_SCENARIOS,
    DEFAULT_PERIOD,
    DEFAULT_SEED,
    DEFAULT_SMOOTHNESS,
    DEFAULT_WINDOW,
    DIVERGENCE_THRESHOLD,
    INTEGRATION_ORDER_OFFSET,
    LINEAR_BENCHMARK_ENTRIES,
    MODE_MODEL_FREE,
    NOISE_STD,
    PLANT_LINEAR,
    PLANT_THREE_TANK,
    PLANT_TYPES,
    RK4_SUBSTEPS,
    TANK_INITIAL_LEVELS,
    TANK_PUMP_MAX,
    TANK_SECTION,
    PIPE_SECTION,
    GRAVITY,
    TANK_VISCOSITY,
)
from ..estimation.differentiator import EstimatorSpec
from ..models.channel import PidGains, UltraLocalChannel, as_alpha_row
from ..models.scenario import ChannelConfig, PlantConfig, Scenario
from ..models.trajectory import ReferenceProfile
from ..plants.base import Plant
from ..plants.linear import LinearMimoPlant, TransferEntry
from ..plants.three_tank import TankParameters, ThreeTankPlant

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {"name", "plant", "channels", "estimator", "references", "noise", "sim"}
LINEAR_PLANT_KEYS = {"type", "outputs", "inputs", "entries", "cancel_common_factors"}
THREE_TANK_KEYS = {"type", "section", "pipe_section", "gravity", "viscosity", "initial_levels"}
ENTRY_KEYS = {"output", "input", "num", "den", "zeros", "poles", "gain", "initial_state"}
ESTIMATOR_KEYS = {"taylor_order", "integration_order", "window"}
CHANNEL_KEYS = {
    "output", "input", "order", "alpha", "beta", "kp", "ki", "kd", "u_min", "u_max", "estimator",
}
REFERENCE_KEYS = {"order", "breakpoints"}
NOISE_KEYS = {"std"}
SIM_KEYS = {"period", "duration", "mode", "seed", "substeps", "divergence_threshold"}


def _check_keys(data: Any, allowed: Iterable[str], path: str) -> Dict[str, Any]:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"'{path}' must be a mapping, got {type(data).__name__}")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        where = f"{path}." if path else ""
        raise ValueError(
            f"unknown key(s) {', '.join(where + str(k) for k in unknown)}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )
    return data


def _number(value: Any, path: str) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a dot (1e-4) as strings
        try:
            value = float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"'{path}' must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValueError(f"'{path}' must be finite, got {value!r}")
    return float(value)


def _optional_number(value: Any, path: str) -> Optional[float]:
    return None if value is None else _number(value, path)


def _integer(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"'{path}' must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValueError(f"'{path}' must be >= {minimum}, got {value}")
    return value


def _numbers(value: Any, path: str) -> List[float]:
    if not isinstance(value, list):
        raise ValueError(f"'{path}' must be a list of numbers, got {value!r}")
    return [_number(v, f"{path}.{i}") for i, v in enumerate(value)]


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValueError(f"'{path}' must be a list, got {type(value).__name__}")
    return value


def read_document(path: str) -> Dict[str, Any]:
    """Read a YAML or JSON scenario document, chosen by suffix."""
    doc_path = Path(path)
    if not doc_path.exists():
        raise ValueError(f"scenario file not found: {doc_path}")
    with open(doc_path, encoding="utf-8") as f:
        try:
            if doc_path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except (yaml.YAMLError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot parse {doc_path}: {exc}")
    if not isinstance(data, dict):
        raise ValueError(f"{doc_path} must contain a mapping at the top level")
    return data


def canned_document(name: str) -> Dict[str, Any]:
    """Raw document of a scenario shipped with the package."""
    if name not in CANNED_SCENARIOS:
        raise ValueError(
            f"unknown scenario '{name}'; available: {', '.join(sorted(CANNED_SCENARIOS))}"
        )
    text = resources.files("mfcsim.data").joinpath("scenarios", CANNED_SCENARIOS[name]).read_text(
        encoding="utf-8"
    )
    return yaml.safe_load(text)


def apply_overrides(data: Dict[str, Any], overrides: Optional[Iterable[str]]) -> Dict[str, Any]:
    """Return a copy of data with ``dotted.path=value`` overrides applied.

    List elements are addressed by 0-based index (``channels.1.kd=5``). Values
    are parsed as YAML, so numbers, booleans and lists keep their types.
    """
    result = copy.deepcopy(data)
    for override in overrides or ():
        key, sep, text = override.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"override must look like key=value, got '{override}'")
        try:
            value = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ValueError(f"cannot parse value of override '{override}': {exc}")

        parts = key.split(".")
        node: Any = result
        for depth, part in enumerate(parts):
            last = depth == len(parts) - 1
            where = ".".join(parts[: depth + 1])
            if isinstance(node, list):
                try:
                    index = int(part)
                except ValueError:
                    raise ValueError(f"'{where}' indexes a list; use an integer index")
                if not 0 <= index < len(node):
                    raise ValueError(f"'{where}' is out of range (list has {len(node)} items)")
                if last:
                    node[index] = value
                else:
                    node = node[index]
            elif isinstance(node, dict):
                if last:
                    node[part] = value
                else:
                    if node.get(part) is None:
                        node[part] = {}
                    node = node[part]
            else:
                raise ValueError(f"cannot set '{key}': '{'.'.join(parts[:depth])}' is not a section")
        logger.debug("override %s = %r", key, value)
    return result


def _parse_entry(raw: Dict[str, Any], path: str, n_outputs: int, n_inputs: int) -> TransferEntry:
    raw = _check_keys(raw, ENTRY_KEYS, path)
    output = _integer(raw.get("output"), f"{path}.output", 1)
    input = _integer(raw.get("input"), f"{path}.input", 1)
    if output > n_outputs or input > n_inputs:
        raise ValueError(f"'{path}' ({output},{input}) is outside the {n_outputs}x{n_inputs} matrix")
    if "num" in raw and "zeros" in raw:
        raise ValueError(f"'{path}' gives both num and zeros")
    if "den" in raw and "poles" in raw:
        raise ValueError(f"'{path}' gives both den and poles")
    if "den" not in raw and "poles" not in raw:
        raise ValueError(f"'{path}' needs den or poles")
    initial_state = raw.get("initial_state")
    if initial_state is not None:
        initial_state = _numbers(initial_state, f"{path}.initial_state")
    gain = _number(raw.get("gain", 1.0), f"{path}.gain")

    if "zeros" in raw or "num" not in raw:
        zeros = _numbers(raw.get("zeros", []), f"{path}.zeros")
        numerator = TransferEntry.from_roots(0, 0, zeros, [], gain).num
    else:
        numerator = gain * np.asarray(_numbers(raw["num"], f"{path}.num"))
    if "poles" in raw:
        denominator = TransferEntry.from_roots(0, 0, [], _numbers(raw["poles"], f"{path}.poles")).den
    else:
        denominator = _numbers(raw["den"], f"{path}.den")
    return TransferEntry(
        output=output - 1,
        input=input - 1,
        num=numerator,
        den=denominator,
        initial_state=initial_state,
    )


def _parse_plant(raw: Any) -> PlantConfig:
    if not isinstance(raw, dict) or "type" not in raw:
        raise ValueError("'plant' section with a 'type' is required")
    plant_type = raw["type"]
    if plant_type not in PLANT_TYPES:
        raise ValueError(f"plant.type must be one of {', '.join(sorted(PLANT_TYPES))}, got '{plant_type}'")

    if plant_type == PLANT_LINEAR:
        raw = _check_keys(raw, LINEAR_PLANT_KEYS, "plant")
        n_outputs = _integer(raw.get("outputs", 2), "plant.outputs", 1)
        n_inputs = _integer(raw.get("inputs", 2), "plant.inputs", 1)
        entries_raw = raw.get("entries")
        if entries_raw is None:
            entries_raw = [dict(e) for e in LINEAR_BENCHMARK_ENTRIES]
        entries = [
            _parse_entry(e, f"plant.entries.{i}", n_outputs, n_inputs)
            for i, e in enumerate(_list(entries_raw, "plant.entries"))
        ]
        cancel = raw.get("cancel_common_factors", False)
        if not isinstance(cancel, bool):
            raise ValueError(f"'plant.cancel_common_factors' must be true or false, got {cancel!r}")
        return PlantConfig(
            type=plant_type, entries=entries, n_outputs=n_outputs, n_inputs=n_inputs,
            cancel_common_factors=cancel,
        )

    raw = _check_keys(raw, THREE_TANK_KEYS, "plant")
    tank = TankParameters(
        section=_number(raw.get("section", TANK_SECTION), "plant.section"),
        pipe_section=_number(raw.get("pipe_section", PIPE_SECTION), "plant.pipe_section"),
        gravity=_number(raw.get("gravity", GRAVITY), "plant.gravity"),
        viscosity=tuple(_numbers(raw.get("viscosity", list(TANK_VISCOSITY)), "plant.viscosity")),
    )
    levels = tuple(_numbers(raw.get("initial_levels", list(TANK_INITIAL_LEVELS)), "plant.initial_levels"))
    if len(levels) != 3 or min(levels) < 0:
        raise ValueError(f"'plant.initial_levels' must be three nonnegative levels, got {list(levels)}")
    return PlantConfig(type=plant_type, tank=tank, initial_levels=levels)


def _parse_estimator(raw: Any, path: str, order: int, window: float, period: float) -> EstimatorSpec:
    raw = _check_keys(raw, ESTIMATOR_KEYS, path)
    taylor = _integer(raw.get("taylor_order", order), f"{path}.taylor_order", 0)
    nu = _integer(
        raw.get("integration_order", taylor + INTEGRATION_ORDER_OFFSET), f"{path}.integration_order"
    )
    window = _number(raw.get("window", window), f"{path}.window")
    spec = EstimatorSpec(taylor, nu, window, period)
    spec.validate()
    return spec


def _parse_reference(raw: Any, path: str) -> ReferenceProfile:
    raw = _check_keys(raw, REFERENCE_KEYS, path)
    smoothness = _integer(raw.get("order", DEFAULT_SMOOTHNESS), f"{path}.order", 0)
    points = []
    for i, point in enumerate(_list(raw.get("breakpoints"), f"{path}.breakpoints")):
        values = _numbers(point, f"{path}.breakpoints.{i}")
        if len(values) != 2:
            raise ValueError(f"'{path}.breakpoints.{i}' must be [time, value]")
        points.append((values[0], values[1]))
    return ReferenceProfile.from_breakpoints(points, smoothness)


def scenario_from_dict(data: Dict[str, Any]) -> Scenario:
    """Validate a raw document and build the Scenario.

    Raises:
        ValueError: on unknown keys, missing sections or out-of-range values
    """
    data = _check_keys(data, TOP_LEVEL_KEYS, "")
    name = data.get("name")
    if not isinstance(name, str) or not name.strip():
        raise ValueError("scenario must include a non-empty 'name'")

    plant = _parse_plant(data.get("plant"))
    sim = _check_keys(data.get("sim"), SIM_KEYS, "sim")
    period = _number(sim.get("period", DEFAULT_PERIOD[plant.type]), "sim.period")
    if period <= 0:
        raise ValueError(f"'sim.period' must be positive, got {period}")
    if "duration" not in sim:
        raise ValueError("'sim.duration' is required")
    duration = _number(sim["duration"], "sim.duration")

    estimator_defaults = _check_keys(data.get("estimator"), ESTIMATOR_KEYS, "estimator")
    default_window = _number(estimator_defaults.get("window", DEFAULT_WINDOW[plant.type]), "estimator.window")

    channels_raw = _list(data.get("channels"), "channels")
    references_raw = _list(data.get("references"), "references")
    if len(references_raw) != len(channels_raw):
        raise ValueError(
            f"need one reference per channel: {len(channels_raw)} channels, {len(references_raw)} references"
        )

    three_tank = plant.type == PLANT_THREE_TANK
    channels = []
    for i, raw in enumerate(channels_raw):
        path = f"channels.{i}"
        raw = _check_keys(raw, CHANNEL_KEYS, path)
        if "kp" not in raw:
            raise ValueError(f"'{path}.kp' is required")
        output = _integer(raw.get("output", i + 1), f"{path}.output", 1)
        input = _integer(raw.get("input", i + 1), f"{path}.input", 1)
        if input > plant.input_count:
            raise ValueError(f"'{path}.input' {input} exceeds the {plant.input_count} plant inputs")
        order = _integer(raw.get("order", 1), f"{path}.order", 1)
        alpha_value = raw.get("alpha", ALPHA_THREE_TANK if three_tank else ALPHA_LINEAR)
        if not isinstance(alpha_value, list):
            alpha_value = _number(alpha_value, f"{path}.alpha")
        alpha = as_alpha_row(alpha_value, plant.input_count, input - 1)
        channel = UltraLocalChannel(
            output=output - 1,
            input=input - 1,
            order=order,
            alpha=alpha,
            beta=_number(raw.get("beta", 0.0), f"{path}.beta"),
        )
        gains = PidGains(
            kp=_number(raw["kp"], f"{path}.kp"),
            ki=_number(raw.get("ki", 0.0), f"{path}.ki"),
            kd=_number(raw.get("kd", 0.0), f"{path}.kd"),
        )
        merged = {**{k: v for k, v in estimator_defaults.items() if k != "window"}, **(raw.get("estimator") or {})}
        spec = _parse_estimator(merged, f"{path}.estimator", order, default_window, period)
        channels.append(ChannelConfig(
            channel=channel,
            gains=gains,
            estimator=spec,
            reference=_parse_reference(references_raw[i], f"references.{i}"),
            u_min=_optional_number(raw.get("u_min", 0.0 if three_tank else None), f"{path}.u_min"),
            u_max=_optional_number(raw.get("u_max", TANK_PUMP_MAX if three_tank else None), f"{path}.u_max"),
        ))

    noise = _check_keys(data.get("noise"), NOISE_KEYS, "noise")
    std = noise.get("std", NOISE_STD)
    std = _numbers(std, "noise.std") if isinstance(std, list) else _number(std, "noise.std")
    if isinstance(std, list) and len(std) != plant.output_count:
        raise ValueError(f"'noise.std' needs {plant.output_count} values, got {len(std)}")

    return Scenario(
        name=name.strip(),
        plant=plant,
        channels=channels,
        period=period,
        duration=duration,
        noise_std=std,
        seed=_integer(sim.get("seed", DEFAULT_SEED), "sim.seed", 0),
        mode=sim.get("mode", MODE_MODEL_FREE),
        substeps=_integer(sim.get("substeps", RK4_SUBSTEPS), "sim.substeps", 1),
        divergence_threshold=_number(
            sim.get("divergence_threshold", DIVERGENCE_THRESHOLD), "sim.divergence_threshold"
        ),
    )


def load_scenario(path: str, overrides: Optional[Iterable[str]] = None) -> Scenario:
    """Load a scenario from a YAML or JSON file.

    Args:
        path: Path to scenario file (.yaml/.yml parsed as YAML, anything else as JSON)
        overrides: Optional ``dotted.path=value`` strings applied before validation

    Returns:
        Validated Scenario

    Raises:
        ValueError: If the file is missing, unparsable or invalid
    """
    return scenario_from_dict(apply_overrides(read_document(path), overrides))


def load_canned_scenario(name: str, overrides: Optional[Iterable[str]] = None) -> Scenario:
    """Load one of the scenarios shipped with the package (see config.CANNED_SCENARIOS)."""
    return scenario_from_dict(apply_overrides(canned_document(name), overrides))


def build_plant(config: PlantConfig) -> Plant:
    """Instantiate the simulator described by a plant configuration."""
    if config.type == PLANT_LINEAR:
        return LinearMimoPlant(
            entries=[copy.deepcopy(e) for e in config.entries],
            n_outputs=config.n_outputs,
            n_inputs=config.n_inputs,
            cancel_common_factors=config.cancel_common_factors,
        )
    return ThreeTankPlant(params=config.tank, initial_levels=config.initial_levels)
