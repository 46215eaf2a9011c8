"""Largest Lyapunov exponent by the Benettin renormalization method."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from memflow import integrators


@dataclass(frozen=True)
class LyapunovEstimate:
    lambda_max: float
    horizon: float


class DegeneratePerturbation(ArithmeticError):
    pass


def lyapunov_max(system, state0, horizon: float, dt: float, rng, eps: float = 1e-4) -> LyapunovEstimate:
    """Co-evolve the trajectory and one tangent vector for ``horizon``.

    The tangent map is the finite-difference linearization of the full
    clamped RK4 step. The initial direction is random, flipped to point
    into the box on coordinates that sit on a face.
    """
    if horizon <= 0 or dt <= 0:
        raise ValueError("horizon and dt must be positive")
    x = system.clamp(system.pack(state0))
    w = rng.standard_normal(len(x))
    w[x <= system.lower] = np.abs(w[x <= system.lower])
    w[x >= system.upper] = -np.abs(w[x >= system.upper])
    norm = np.linalg.norm(w)
    if norm == 0:
        raise DegeneratePerturbation("zero initial perturbation")
    w /= norm

    steps = max(1, int(round(horizon / dt)))
    log_sum = 0.0
    for k in range(steps):
        base = integrators.rk4(system, x, dt)
        moved = integrators.rk4(system, system.clamp(x + eps * w), dt)
        x = base
        w = (moved - base) / eps
        growth = np.linalg.norm(w)
        if growth == 0 or not np.isfinite(growth):
            raise DegeneratePerturbation(f"tangent vector collapsed at step {k + 1}")
        log_sum += np.log(growth)
        w /= growth
    return LyapunovEstimate(log_sum / (steps * dt), steps * dt)
