"""Smooth set-point trajectories with continuous derivatives."""

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from ..config import DEFAULT_SMOOTHNESS


@dataclass(frozen=True)
class Segment:
    """Transition from start_value at start_time to end_value at end_time."""

    start_time: float
    start_value: float
    end_time: float
    end_value: float

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time


def smoothstep(order: int) -> Polynomial:
    """Degree 2r+1 polynomial from 0 to 1 on [0, 1] with r vanishing derivatives at both ends.

    S_r(s) = s^(r+1) * sum_k C(r+k, k) (1-s)^k; r = 2 gives 10s^3 - 15s^4 + 6s^5.
    """
    s = Polynomial([0.0, 1.0])
    total = Polynomial([0.0])
    for k in range(order + 1):
        total = total + math.comb(order + k, k) * (1 - s) ** k
    return s ** (order + 1) * total


@dataclass
class ReferenceProfile:
    """Piecewise reference made of smoothstep transitions and constant holds.

    eval returns (y*, y*', ..., y*^(r)) where r is the smoothness order.
    """

    segments: List[Segment]
    smoothness: int = DEFAULT_SMOOTHNESS
    _basis: List[Polynomial] = field(default_factory=list, init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a reference profile needs at least one segment")
        if self.smoothness < 0:
            raise ValueError(f"smoothness must be >= 0, got {self.smoothness}")
        previous = None
        for segment in self.segments:
            if not segment.end_time > segment.start_time:
                raise ValueError(
                    f"segment end time {segment.end_time} must be after start time {segment.start_time}"
                )
            if previous is not None:
                if segment.start_time < previous.end_time:
                    raise ValueError(
                        f"segment starting at {segment.start_time} overlaps the one ending at {previous.end_time}"
                    )
                if segment.start_value != previous.end_value:
                    raise ValueError(
                        f"segment starting at {segment.start_time} begins at {segment.start_value} "
                        f"but the previous one ends at {previous.end_value}"
                    )
            previous = segment
        step = smoothstep(self.smoothness)
        self._basis = [step.deriv(j) for j in range(self.smoothness + 1)]

    @classmethod
    def from_breakpoints(
        cls, breakpoints: Sequence[Tuple[float, float]], smoothness: int = DEFAULT_SMOOTHNESS
    ) -> "ReferenceProfile":
        """Profile through (time, value) breakpoints.

        Consecutive breakpoints with different values are joined by a
        transition, equal values by a hold. A single breakpoint gives a constant.
        """
        points = [(float(t), float(v)) for t, v in breakpoints]
        if not points:
            raise ValueError("reference needs at least one (time, value) breakpoint")
        for (t0, _), (t1, _) in zip(points, points[1:]):
            if not t1 > t0:
                raise ValueError(f"breakpoint times must increase, got {t0} then {t1}")
        if len(points) == 1:
            t0, v0 = points[0]
            return cls([Segment(t0, v0, t0 + 1.0, v0)], smoothness)
        segments = [
            Segment(t0, v0, t1, v1) for (t0, v0), (t1, v1) in zip(points, points[1:])
        ]
        return cls(segments, smoothness)

    @property
    def start_value(self) -> float:
        return self.segments[0].start_value

    @property
    def span(self) -> float:
        """Largest minus smallest value taken by the profile."""
        values = [s.start_value for s in self.segments] + [self.segments[-1].end_value]
        return max(values) - min(values)

    def eval(self, t: float) -> np.ndarray:
        """Value and derivatives 1..r at time t."""
        out = np.zeros(self.smoothness + 1)
        first = self.segments[0]
        if t <= first.start_time:
            out[0] = first.start_value
            return out
        for segment in self.segments:
            if t < segment.end_time:
                if t < segment.start_time:
                    out[0] = segment.start_value
                    return out
                sigma = (t - segment.start_time) / segment.duration
                delta = segment.end_value - segment.start_value
                for j, poly in enumerate(self._basis):
                    out[j] = delta * poly(sigma) / segment.duration ** j
                out[0] += segment.start_value
                return out
        out[0] = self.segments[-1].end_value
        return out

    def sample(self, times: Sequence[float]) -> np.ndarray:
        """eval at each time, shape (len(times), r + 1)."""
        return np.array([self.eval(t) for t in times])

    def to_dict(self) -> dict:
        points = [[self.segments[0].start_time, self.segments[0].start_value]]
        points += [[s.end_time, s.end_value] for s in self.segments]
        return {"order": self.smoothness, "breakpoints": points}
