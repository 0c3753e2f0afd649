"""Run metrics and the model-free vs classic PID comparison."""

import logging
import math
from typing import Dict, Optional

import numpy as np

from ..config import MODE_CLASSIC_PID, MODE_MODEL_FREE
from ..models.scenario import Scenario
from ..output.results import ComparisonResult, RunSummary, TimeSeries
from ..plants.base import Plant
from .engine import EstimatorFactory, SimulationEngine, algebraic_estimator

logger = logging.getLogger(__name__)


def rmse_after_warmup(series: TimeSeries) -> Dict[str, float]:
    """RMSE of true output against reference per channel, from the warm-up tick on.

    A diverged run scores inf.
    """
    result = {}
    for output in series.outputs:
        label = f"y_{output}"
        if series.diverged:
            result[label] = math.inf
            continue
        error = (series.column(f"y_true_{output}") - series.column(f"ref_{output}"))[series.warmup_ticks:]
        result[label] = float(np.sqrt(np.mean(error ** 2))) if error.size else math.nan
    return result


def summarize(series: TimeSeries, scenario: Optional[Scenario] = None) -> RunSummary:
    spans = {}
    if scenario is not None:
        spans = {f"y_{c.channel.output + 1}": c.reference.span for c in scenario.channels}
    max_abs_u = {}
    for i in range(1, series.n_inputs + 1):
        values = series.column(f"u_{i}")
        max_abs_u[f"u_{i}"] = float(np.max(np.abs(values))) if values.size else 0.0
    return RunSummary(
        scenario_name=series.scenario_name,
        mode=series.mode,
        seed=series.seed,
        ticks=len(series),
        rmse=rmse_after_warmup(series),
        reference_span=spans,
        max_abs_u=max_abs_u,
        diverged=series.diverged,
        divergence_reason=series.divergence_reason,
        divergence_time=series.divergence_time,
    )


def compare(
    scenario: Scenario,
    plant: Optional[Plant] = None,
    estimator_factory: EstimatorFactory = algebraic_estimator,
) -> ComparisonResult:
    """Run the scenario in model-free mode and with F forced to zero, same seed."""
    runs = {}
    for mode in (MODE_MODEL_FREE, MODE_CLASSIC_PID):
        variant = scenario.with_mode(mode)
        runs[mode] = SimulationEngine(variant, plant, estimator_factory).run()
    result = ComparisonResult(
        model_free=runs[MODE_MODEL_FREE],
        classic=runs[MODE_CLASSIC_PID],
        model_free_summary=summarize(runs[MODE_MODEL_FREE], scenario),
        classic_summary=summarize(runs[MODE_CLASSIC_PID], scenario),
    )
    for label, (mf, classic) in result.rmse_pair.items():
        logger.info("%s rmse: model_free %.4g, classic_pid %.4g", label, mf, classic)
    return result
