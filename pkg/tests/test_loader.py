import json

import numpy as np
import pytest
import yaml

from mfcsim.cli import main
from mfcsim.data.loader import (
    apply_overrides,
    build_plant,
    canned_document,
    load_canned_scenario,
    load_scenario,
    scenario_from_dict,
)
from mfcsim.plants.linear import LinearMimoPlant
from mfcsim.plants.three_tank import ThreeTankPlant

MINIMAL = {
    "name": "minimal",
    "plant": {"type": "three_tank"},
    "channels": [{"kp": 10.0}, {"kp": 10.0}],
    "references": [{"breakpoints": [[0.0, 0.1]]}, {"breakpoints": [[0.0, 0.1]]}],
    "sim": {"duration": 5.0},
}


def test_linear_canned_scenario():
    scenario = load_canned_scenario("linear-2x2")
    assert scenario.name == "linear-2x2"
    assert scenario.plant.type == "linear"
    assert len(scenario.plant.entries) == 3
    assert scenario.period == 0.01
    assert scenario.duration == 40.0
    np.testing.assert_allclose(scenario.noise_std, [0.1, 0.1])

    first, second = scenario.channels
    np.testing.assert_array_equal(first.channel.alpha, [10.0, 0.0])
    np.testing.assert_array_equal(second.channel.alpha, [0.0, 10.0])
    assert (first.gains.kp, first.gains.ki, first.gains.kd) == (1.0, 0.0, 0.0)
    assert (second.gains.kp, second.gains.ki, second.gains.kd) == (50.0, 50.0, 10.0)
    assert second.channel.order == 2
    assert second.estimator.taylor_order == 2
    assert second.estimator.integration_order == 4
    assert second.estimator.window_length == 0.1
    assert first.u_min is None and first.u_max is None


def test_three_tank_canned_scenario():
    scenario = load_canned_scenario("three-tank")
    assert scenario.plant.type == "three_tank"
    assert scenario.plant.tank.section == 0.0154
    assert scenario.plant.tank.viscosity == (0.5, 0.675, 0.5)
    assert len(scenario.noise_std) == 3
    for config in scenario.channels:
        assert config.channel.alpha_gain == 200.0
        assert (config.gains.kp, config.gains.ki) == (10.0, 0.02)
        assert (config.u_min, config.u_max) == (0.0, 1e-4)
    assert isinstance(build_plant(scenario.plant), ThreeTankPlant)


def test_defaults_fill_minimal_scenario():
    scenario = scenario_from_dict(MINIMAL)
    assert scenario.period == 0.1
    assert scenario.seed == 42
    assert scenario.mode == "model_free"
    config = scenario.channels[1]
    assert config.channel.output == 1 and config.channel.input == 1
    assert config.channel.alpha_gain == 200.0
    assert config.estimator.window_length == 1.0
    assert (config.u_min, config.u_max) == (0.0, 1e-4)


def test_linear_plant_defaults_to_benchmark():
    data = {
        **MINIMAL,
        "plant": {"type": "linear"},
        "references": [{"breakpoints": [[0.0, 0.0]]}] * 2,
    }
    scenario = scenario_from_dict(data)
    plant = build_plant(scenario.plant)
    assert isinstance(plant, LinearMimoPlant)
    assert plant.metadata.output_orders == (4, 4)
    assert scenario.channels[0].channel.alpha_gain == 10.0


def test_unknown_keys_are_named():
    with pytest.raises(ValueError, match="colour"):
        scenario_from_dict({**MINIMAL, "colour": "blue"})
    data = yaml.safe_load(yaml.safe_dump(MINIMAL))
    data["channels"][0]["gain"] = 3
    with pytest.raises(ValueError, match=r"channels\.0\.gain"):
        scenario_from_dict(data)


@pytest.mark.parametrize(
    "change, message",
    [
        ({"name": ""}, "name"),
        ({"plant": {"type": "steam"}}, "plant.type"),
        ({"sim": {}}, "duration"),
        ({"channels": [{"kp": 10.0}]}, "reference"),
        ({"channels": [{}, {"kp": 1.0}]}, "kp"),
        ({"sim": {"duration": 5.0, "mode": "fuzzy"}}, "mode"),
        ({"sim": {"duration": 0.5}}, "warm-up"),
        ({"estimator": {"integration_order": 1}}, "integration_order"),
    ],
)
def test_invalid_documents(change, message):
    with pytest.raises(ValueError, match=message):
        scenario_from_dict({**MINIMAL, **change})


def test_overrides():
    data = canned_document("linear-2x2")
    changed = apply_overrides(data, ["sim.duration=10", "channels.1.kd=5", "noise.std=[0.1, 0.2]"])
    assert changed["sim"]["duration"] == 10
    assert changed["channels"][1]["kd"] == 5
    assert data["sim"]["duration"] == 40.0

    scenario = scenario_from_dict(changed)
    assert scenario.duration == 10.0
    assert scenario.channels[1].gains.kd == 5.0
    np.testing.assert_allclose(scenario.noise_std, [0.1, 0.2])


def test_override_creates_missing_sections():
    changed = apply_overrides({"name": "x"}, ["sim.seed=3"])
    assert changed["sim"] == {"seed": 3}


@pytest.mark.parametrize("override", ["sim.duration", "=3", "channels.x.kp=1", "channels.9.kp=1", "name.first=1"])
def test_bad_overrides(override):
    with pytest.raises(ValueError):
        apply_overrides(canned_document("linear-2x2"), [override])


def test_exponent_strings_are_numbers():
    scenario = load_canned_scenario("three-tank", ["sim.divergence_threshold=1e6"])
    assert scenario.divergence_threshold == 1e6


@pytest.mark.parametrize(
    "override, path",
    [
        ("sim.duration=inf", "sim.duration"),
        ("sim.duration=.inf", "sim.duration"),
        ("estimator.window=nan", "estimator.window"),
        ("estimator.window=1e400", "estimator.window"),
        ("channels.0.kp=-inf", r"channels\.0\.kp"),
    ],
)
def test_non_finite_numbers_rejected(override, path):
    with pytest.raises(ValueError, match=f"{path}.*finite"):
        load_canned_scenario("linear-2x2", [override])


def test_non_finite_override_exits_1(capsys):
    assert main(["run", "--scenario", "linear-2x2", "--set", "sim.duration=inf"]) == 1
    assert "sim.duration" in capsys.readouterr().err


def test_yaml_and_json_files(tmp_path):
    yaml_path = tmp_path / "scenario.yaml"
    json_path = tmp_path / "scenario.json"
    yaml_path.write_text(yaml.safe_dump(MINIMAL), encoding="utf-8")
    json_path.write_text(json.dumps(MINIMAL), encoding="utf-8")

    from_yaml = load_scenario(str(yaml_path))
    from_json = load_scenario(str(json_path), ["sim.seed=5"])
    assert from_yaml.to_dict() == {**from_json.to_dict(), "seed": 42}


def test_file_errors(tmp_path):
    with pytest.raises(ValueError, match="not found"):
        load_scenario(str(tmp_path / "missing.yaml"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError, match="cannot parse"):
        load_scenario(str(broken))
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="mapping"):
        load_scenario(str(listing))
    with pytest.raises(ValueError, match="unknown scenario"):
        load_canned_scenario("four-tank")
