"""Simulation package."""

from .compare import compare, rmse_after_warmup, summarize
from .engine import SimulationEngine, algebraic_estimator, run

__all__ = [
    "SimulationEngine",
    "algebraic_estimator",
    "run",
    "compare",
    "rmse_after_warmup",
    "summarize",
]
