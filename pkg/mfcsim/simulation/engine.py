"""Closed-loop simulation engine for model-free control."""

import logging
from typing import Callable, List, Optional, Protocol

import numpy as np

from ..config import MODE_MODEL_FREE
from ..control.ipid import compute_control, reset
from ..control.ultra_local import check_square_selection, estimate_F, validate_channel
from ..data.loader import build_plant
from ..estimation.buffer import AlgebraicEstimator, ChannelEstimate
from ..estimation.differentiator import build_kernel
from ..models.channel import ChannelControllerState
from ..models.scenario import ChannelConfig, Scenario
from ..output.results import TimeSeries
from ..plants.base import Plant

logger = logging.getLogger(__name__)


class ChannelEstimator(Protocol):
    """What the loop needs from a per-output estimator."""

    warmup_samples: int

    def update(self, sample: float) -> ChannelEstimate:
        ...


EstimatorFactory = Callable[[ChannelConfig], ChannelEstimator]


def algebraic_estimator(config: ChannelConfig) -> AlgebraicEstimator:
    return AlgebraicEstimator(build_kernel(config.estimator), name=f"y_{config.channel.output + 1}")


class SimulationEngine:
    """Runs one scenario: plant stepping, noise, estimation, F, iPID control, logging."""

    def __init__(
        self,
        scenario: Scenario,
        plant: Optional[Plant] = None,
        estimator_factory: EstimatorFactory = algebraic_estimator,
    ):
        """Initialize the simulation.

        Args:
            scenario: Validated scenario
            plant: Plant to control; built from scenario.plant when omitted
            estimator_factory: Builds the estimator of each channel
        """
        self.scenario = scenario
        self.plant = plant if plant is not None else build_plant(scenario.plant)
        self.estimator_factory = estimator_factory
        self._check_configuration()

    def _check_configuration(self) -> None:
        metadata = self.plant.metadata
        channels = [c.channel for c in self.scenario.channels]
        check_square_selection(self.scenario.selection, metadata)
        inputs = sorted(c.input for c in channels)
        if inputs != list(range(metadata.n_inputs)):
            raise ValueError(
                f"each plant input must be driven by exactly one channel, got inputs "
                f"{[i + 1 for i in inputs]}"
            )
        for channel in channels:
            if channel.alpha.size != metadata.n_inputs:
                raise ValueError(
                    f"channel of output {channel.output + 1} has {channel.alpha.size} alpha gains "
                    f"for {metadata.n_inputs} plant inputs"
                )
            validate_channel(channel, metadata)
        if len(self.scenario.noise_std) != metadata.n_outputs:
            raise ValueError(
                f"noise std has {len(self.scenario.noise_std)} values for {metadata.n_outputs} outputs"
            )

    def _diverged(self, y: np.ndarray, u: np.ndarray) -> Optional[str]:
        threshold = self.scenario.divergence_threshold
        if not np.all(np.isfinite(y)):
            return "non-finite plant output"
        if not np.all(np.isfinite(u)):
            return "non-finite control"
        if np.any(np.abs(y) > threshold):
            return f"|y| exceeded {threshold:g}"
        if np.any(np.abs(u) > threshold):
            return f"|u| exceeded {threshold:g}"
        return None

    def run(self) -> TimeSeries:
        """Run the closed loop for the scenario duration.

        Returns:
            TimeSeries with one row per control period
        """
        scenario = self.scenario
        configs = scenario.channels
        h = scenario.period
        substep = h / scenario.substeps
        model_free = scenario.mode == MODE_MODEL_FREE
        metadata = self.plant.metadata

        self.plant.reset()
        rng = np.random.default_rng(scenario.seed)
        estimators: List[ChannelEstimator] = [self.estimator_factory(c) for c in configs]
        states = [ChannelControllerState(c.gains, c.u_min, c.u_max) for c in configs]
        for config, state in zip(configs, states):
            config.channel.reset()
            reset(state)

        series = TimeSeries(
            scenario_name=scenario.name,
            mode=scenario.mode,
            seed=scenario.seed,
            period=h,
            outputs=[c.channel.output + 1 for c in configs],
            orders=[c.channel.order for c in configs],
            n_inputs=metadata.n_inputs,
            warmup_ticks=scenario.warmup_ticks,
        )
        logger.info(
            "running %s (%s, seed %d): %d ticks of %g s",
            scenario.name, scenario.mode, scenario.seed, scenario.n_ticks, h,
        )

        u = np.zeros(metadata.n_inputs)
        for tick in range(scenario.n_ticks):
            t = tick * h
            y_true = self.plant.output(u)
            y_meas = y_true + scenario.noise_std * rng.standard_normal(metadata.n_outputs)

            u_prev = u
            u_next = np.zeros(metadata.n_inputs)
            row = [t]
            for config, estimator, state in zip(configs, estimators, states):
                channel = config.channel
                j = channel.output
                estimate = estimator.update(float(y_meas[j]))
                ref = config.reference.eval(t)

                if model_free and estimate.ready:
                    F = estimate_F(channel, estimate.derivative(channel.order), u_prev)
                else:
                    F = 0.0
                    channel.last_F = 0.0
                e = ref[0] - estimate.denoised
                e_dot = ref[1] - estimate.derivative(1)
                u_next[channel.input] = compute_control(
                    state, channel, ref[channel.order], F, e, e_dot, h
                )

                row.extend([
                    ref[0], ref[1], y_true[j], y_meas[j], estimate.denoised,
                    estimate.derivative(1), F, e,
                ])
                if channel.order >= 2:
                    row.append(estimate.derivative(2))
            row.extend(u_next.tolist())
            series.append([float(value) for value in row])

            reason = self._diverged(y_true, u_next)
            if reason is not None:
                series.diverged = True
                series.divergence_reason = reason
                series.divergence_tick = tick
                logger.warning("run diverged at t=%.4g s: %s", t, reason)
                break

            u = u_next
            for _ in range(scenario.substeps):
                self.plant.step(u, substep)

        logger.info("finished %s after %d ticks", scenario.name, len(series))
        return series


def run(scenario: Scenario, plant: Optional[Plant] = None) -> TimeSeries:
    """Simulate the scenario once."""
    return SimulationEngine(scenario, plant=plant).run()
