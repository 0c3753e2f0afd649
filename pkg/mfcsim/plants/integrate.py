"""Fixed-step fourth-order Runge-Kutta integration."""

from typing import Callable, Tuple

import numpy as np

VectorField = Callable[[np.ndarray, np.ndarray], np.ndarray]


def rk4_step(field: VectorField, x: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of x' = field(x, u) with u held constant."""
    k1 = field(x, u)
    k2 = field(x + 0.5 * dt * k1, u)
    k3 = field(x + 0.5 * dt * k2, u)
    k4 = field(x + dt * k3, u)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_linear_map(a: np.ndarray, b: np.ndarray, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """RK4 step of x' = A x + B u written as x <- Phi x + Gamma u.

    Phi is the degree-4 Taylor polynomial of exp(A dt); the result equals
    rk4_step on the same system for constant u.
    """
    n = a.shape[0]
    ad = a * dt
    ad2 = ad @ ad
    ad3 = ad2 @ ad
    eye = np.eye(n)
    phi = eye + ad + ad2 / 2.0 + ad3 / 6.0 + ad3 @ ad / 24.0
    gamma = dt * (eye + ad / 2.0 + ad2 / 6.0 + ad3 / 24.0) @ b
    return phi, gamma
