"""Linear multivariable plant given as a matrix of transfer functions."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .base import Plant, PlantMetadata
from .integrate import rk4_linear_map

logger = logging.getLogger(__name__)


class StateSpace(NamedTuple):
    """Realization x' = A x + B u, y = C x + D u of a single-input single-output entry."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: float

    @property
    def order(self) -> int:
        return self.a.shape[0]


def _trim(coeffs: Sequence[float], what: str) -> np.ndarray:
    poly = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if what == "denominator" and poly.size == 0:
        raise ValueError("denominator polynomial is zero")
    return poly


def realize_tf(num: Sequence[float], den: Sequence[float]) -> StateSpace:
    """Controllable canonical realization of num(s)/den(s).

    Coefficients are given highest power first. The denominator is normalized
    to monic; a proper (not strictly proper) entry gets its feedthrough D from
    polynomial division.
    """
    den = _trim(den, "denominator")
    num = _trim(num, "numerator")
    if num.size > den.size:
        raise ValueError(
            f"transfer function is improper: numerator degree {num.size - 1} > "
            f"denominator degree {den.size - 1}"
        )
    lead = den[0]
    den = den / lead
    num = np.pad(num / lead, (den.size - num.size, 0)) if num.size else np.zeros(den.size)

    n = den.size - 1
    d = float(num[0])
    residual = num[1:] - d * den[1:]

    a = np.zeros((n, n))
    if n:
        a[:-1, 1:] = np.eye(n - 1)
        a[-1, :] = -den[1:][::-1]
    b = np.zeros((n, 1))
    if n:
        b[-1, 0] = 1.0
    c = residual[::-1].reshape(1, n)
    return StateSpace(a=a, b=b, c=c, d=d)


def frequency_response(system: StateSpace, omega: Sequence[float]) -> np.ndarray:
    """C (j w I - A)^-1 B + D at each angular frequency w."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    response = np.empty(omega.shape, dtype=complex)
    eye = np.eye(system.order)
    for k, w in enumerate(omega):
        if system.order:
            resolvent = np.linalg.solve(1j * w * eye - system.a, system.b)
            response[k] = (system.c @ resolvent)[0, 0] + system.d
        else:
            response[k] = system.d
    return response


def cancel_common_powers(num: np.ndarray, den: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Divide out the common factor s^k shared by numerator and denominator."""
    num = _trim(num, "numerator")
    den = _trim(den, "denominator")
    while num.size > 1 and den.size > 1 and num[-1] == 0 and den[-1] == 0:
        num = num[:-1]
        den = den[:-1]
    return num, den


@dataclass
class TransferEntry:
    """Entry (output, input) of the transfer matrix, indices 0-based."""

    output: int
    input: int
    num: np.ndarray
    den: np.ndarray
    initial_state: Optional[np.ndarray] = None

    @classmethod
    def from_roots(
        cls,
        output: int,
        input: int,
        zeros: Sequence[float],
        poles: Sequence[float],
        gain: float = 1.0,
        initial_state: Optional[Sequence[float]] = None,
    ) -> "TransferEntry":
        """Entry gain * prod(s - z) / prod(s - p)."""
        num = gain * np.poly(np.asarray(zeros, dtype=float)) if len(zeros) else np.array([gain])
        den = np.poly(np.asarray(poles, dtype=float)) if len(poles) else np.array([1.0])
        state = None if initial_state is None else np.asarray(initial_state, dtype=float)
        return cls(output=output, input=input, num=np.atleast_1d(num), den=np.atleast_1d(den), initial_state=state)


@dataclass
class _RealizedEntry:
    entry: TransferEntry
    system: StateSpace
    state: np.ndarray
    maps: Dict[float, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)


class LinearMimoPlant(Plant):
    """Sum of per-entry state-space realizations, y_j = sum_i G_ji(s) u_i.

    Zero entries are not realized. Each entry keeps its own state vector.
    """

    def __init__(
        self,
        entries: List[TransferEntry],
        n_outputs: int,
        n_inputs: int,
        cancel_common_factors: bool = False,
    ):
        if n_outputs < 1 or n_inputs < 1:
            raise ValueError("a linear plant needs at least one input and one output")
        self.n_outputs = n_outputs
        self.n_inputs = n_inputs
        self.cancel_common_factors = cancel_common_factors
        self._entries: List[_RealizedEntry] = []
        seen = set()
        for entry in entries:
            if not (0 <= entry.output < n_outputs and 0 <= entry.input < n_inputs):
                raise ValueError(
                    f"entry ({entry.output + 1},{entry.input + 1}) is outside the "
                    f"{n_outputs}x{n_inputs} transfer matrix"
                )
            key = (entry.output, entry.input)
            if key in seen:
                raise ValueError(f"entry ({entry.output + 1},{entry.input + 1}) given twice")
            seen.add(key)
            if not np.any(entry.num):
                continue
            if cancel_common_factors:
                num, den = cancel_common_powers(entry.num, entry.den)
                entry = TransferEntry(entry.output, entry.input, num, den, entry.initial_state)
            system = realize_tf(entry.num, entry.den)
            state = np.zeros(system.order)
            if entry.initial_state is not None:
                state = self._checked_state(entry.initial_state, system.order, key)
            self._entries.append(_RealizedEntry(entry=entry, system=system, state=state))
            logger.debug(
                "entry (%d,%d) realized with %d states", entry.output + 1, entry.input + 1, system.order
            )

        orders = [0] * n_outputs
        for realized in self._entries:
            orders[realized.entry.output] = max(orders[realized.entry.output], realized.system.order)
        self._metadata = PlantMetadata(
            n_inputs=n_inputs,
            n_outputs=n_outputs,
            output_orders=tuple(orders),
            input_nonlinear=False,
        )

    @staticmethod
    def _checked_state(state, order: int, key: Tuple[int, int]) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        if state.shape != (order,):
            raise ValueError(
                f"initial state of entry ({key[0] + 1},{key[1] + 1}) must have {order} values"
            )
        return state.copy()

    @property
    def metadata(self) -> PlantMetadata:
        return self._metadata

    def realization(self, output: int, input: int) -> Optional[StateSpace]:
        """State-space realization of entry (output, input), None for a zero entry."""
        for realized in self._entries:
            if (realized.entry.output, realized.entry.input) == (output, input):
                return realized.system
        return None

    def set_entry_state(self, output: int, input: int, state: Sequence[float]) -> None:
        for realized in self._entries:
            if (realized.entry.output, realized.entry.input) == (output, input):
                realized.state = self._checked_state(state, realized.system.order, (output, input))
                return
        raise ValueError(f"entry ({output + 1},{input + 1}) is zero and has no state")

    def output(self, u: np.ndarray) -> np.ndarray:
        u = self._check_input(u)
        y = np.zeros(self.n_outputs)
        for realized in self._entries:
            system = realized.system
            value = system.d * u[realized.entry.input]
            if system.order:
                value += float(system.c[0] @ realized.state)
            y[realized.entry.output] += value
        return y

    def step(self, u: np.ndarray, dt: float) -> np.ndarray:
        if dt <= 0:
            raise ValueError(f"integration step must be positive, got {dt}")
        u = self._check_input(u)
        for realized in self._entries:
            if not realized.system.order:
                continue
            if dt not in realized.maps:
                realized.maps[dt] = rk4_linear_map(realized.system.a, realized.system.b, dt)
            phi, gamma = realized.maps[dt]
            realized.state = phi @ realized.state + gamma[:, 0] * u[realized.entry.input]
        return self.output(u)

    def reset(self) -> None:
        for realized in self._entries:
            initial = realized.entry.initial_state
            realized.state = np.zeros(realized.system.order) if initial is None else initial.astype(float).copy()


def linear_step(plant: LinearMimoPlant, u: np.ndarray, dt: float) -> np.ndarray:
    """Advance the linear plant by one RK4 step and return its outputs."""
    return plant.step(u, dt)
