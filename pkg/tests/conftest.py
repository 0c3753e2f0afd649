"""Shared fixtures: canned scenario runs and a plant with exactly known dynamics."""

import numpy as np
import pytest

from mfcsim.data.loader import load_canned_scenario
from mfcsim.estimation.buffer import ChannelEstimate
from mfcsim.estimation.differentiator import EstimatorSpec
from mfcsim.models.channel import PidGains, UltraLocalChannel
from mfcsim.models.scenario import ChannelConfig, PlantConfig, Scenario
from mfcsim.models.trajectory import ReferenceProfile
from mfcsim.plants.base import Plant, PlantMetadata
from mfcsim.simulation.compare import compare
from mfcsim.simulation.engine import SimulationEngine


class DriftPlant(Plant):
    """y' = drift + alpha * u, integrated exactly for piecewise-constant u."""

    def __init__(self, drift: float, alpha: float, y0: float = 0.0):
        self.drift = drift
        self.alpha = alpha
        self.y0 = y0
        self.y = y0
        self.held = 0.0

    @property
    def metadata(self) -> PlantMetadata:
        return PlantMetadata(n_inputs=1, n_outputs=1, output_orders=(1,))

    def rate(self) -> float:
        return self.drift + self.alpha * self.held

    def output(self, u):
        return np.array([self.y])

    def step(self, u, dt):
        u = self._check_input(u)
        self.held = float(u[0])
        self.y += dt * self.rate()
        return self.output(u)

    def reset(self):
        self.y = self.y0
        self.held = 0.0


class ExactDerivative:
    """Estimator stub reading the true derivative off a DriftPlant."""

    warmup_samples = 1

    def __init__(self, plant: DriftPlant):
        self.plant = plant

    def update(self, sample: float) -> ChannelEstimate:
        return ChannelEstimate(
            denoised=sample, derivatives=np.array([sample, self.plant.rate()]), ready=True
        )


def drift_scenario(alpha: float, kp: float, period: float = 1e-3, duration: float = 1.0) -> Scenario:
    config = ChannelConfig(
        channel=UltraLocalChannel(output=0, input=0, order=1, alpha=[alpha]),
        gains=PidGains(kp=kp),
        estimator=EstimatorSpec(1, 3, 10 * period, period),
        reference=ReferenceProfile.from_breakpoints([(0.0, 1.0)]),
    )
    return Scenario(
        name="drift",
        plant=PlantConfig(type="linear", n_outputs=1, n_inputs=1),
        channels=[config],
        period=period,
        duration=duration,
        noise_std=0.0,
    )


@pytest.fixture
def drift_setup():
    """Factory returning (scenario, plant, estimator_factory) for a drift plant."""

    def make(drift=0.5, alpha=10.0, kp=2.0):
        plant = DriftPlant(drift, alpha)
        return drift_scenario(alpha, kp), plant, lambda config: ExactDerivative(plant)

    return make


@pytest.fixture(scope="session")
def linear_scenario():
    return load_canned_scenario("linear-2x2")


@pytest.fixture(scope="session")
def linear_comparison(linear_scenario):
    return compare(linear_scenario)


@pytest.fixture(scope="session")
def three_tank_scenario():
    return load_canned_scenario("three-tank")


@pytest.fixture(scope="session")
def three_tank_series(three_tank_scenario):
    return SimulationEngine(three_tank_scenario).run()
