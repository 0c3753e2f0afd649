"""Intelligent PID law u = (y*^(n) - F + K_P e + K_I int e + K_D de/dt) / alpha."""

import logging

from ..models.channel import ChannelControllerState, UltraLocalChannel

logger = logging.getLogger(__name__)


def compute_control(
    state: ChannelControllerState,
    channel: UltraLocalChannel,
    ref_deriv_n: float,
    F_hat: float,
    e: float,
    e_dot: float,
    dt: float,
) -> float:
    """One control update for a decoupled channel.

    The error integral advances by the trapezoid rule (rectangle on the first
    step after a reset). When the output is clamped the integral update is
    undone and the control recomputed.
    """
    alpha = channel.alpha_gain
    if alpha == 0:
        raise ValueError(f"channel of output {channel.output + 1} has alpha_{{j,j}} = 0")

    gains = state.gains
    previous_integral = state.integral_e
    if state.last_e is None:
        state.integral_e += e * dt
    else:
        state.integral_e += 0.5 * (e + state.last_e) * dt

    def law(integral: float) -> float:
        return (ref_deriv_n - F_hat + gains.kp * e + gains.ki * integral + gains.kd * e_dot) / alpha

    raw = law(state.integral_e)
    u = state.clamp(raw)
    if u != raw:
        state.integral_e = previous_integral
        u = state.clamp(law(previous_integral))
        state.saturated_steps += 1
        logger.debug("output %d saturated at %g (requested %g)", channel.output + 1, u, raw)

    state.last_e = e
    state.last_u = u
    return u


def reset(state: ChannelControllerState) -> None:
    """Clear the controller memory."""
    state.integral_e = 0.0
    state.last_u = 0.0
    state.last_e = None
    state.saturated_steps = 0
