"""Fixed-step update rules on flat state vectors.

Every rule finishes with ``system.clamp``. RK4 also clamps its stage
arguments, since the flow is only defined inside the box.
"""

from __future__ import annotations

import numpy as np


class IntegrationFault(FloatingPointError):
    def __init__(self, coordinate: int, stage: str):
        super().__init__(f"non-finite derivative at coordinate {coordinate} ({stage})")
        self.coordinate = coordinate


def _checked(f: np.ndarray, stage: str) -> np.ndarray:
    if not np.isfinite(f).all():
        raise IntegrationFault(int(np.flatnonzero(~np.isfinite(f))[0]), stage)
    return f


def rk4(system, x: np.ndarray, dt: float) -> np.ndarray:
    clamp = system.clamp
    k1 = _checked(system.flow(x), "k1")
    k2 = _checked(system.flow(clamp(x + 0.5 * dt * k1)), "k2")
    k3 = _checked(system.flow(clamp(x + 0.5 * dt * k2)), "k3")
    k4 = _checked(system.flow(clamp(x + dt * k3)), "k4")
    return system.clamp(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def euler(system, x: np.ndarray, dt: float) -> np.ndarray:
    return system.clamp(x + dt * _checked(system.flow(x), "euler"))


def euler_maruyama(system, x: np.ndarray, dt: float, theta: float, mask, rng) -> np.ndarray:
    """Euler step plus ``sqrt(2*theta*dt)`` Gaussian kicks on ``mask`` coordinates.

    ``theta == 0`` takes the plain Euler path and draws nothing from ``rng``.
    """
    drift = x + dt * _checked(system.flow(x), "euler")
    if theta == 0:
        return system.clamp(drift)
    kick = np.zeros_like(x)
    kick[mask] = rng.standard_normal(int(np.count_nonzero(mask)))
    return system.clamp(drift + np.sqrt(2.0 * theta * dt) * kick)
