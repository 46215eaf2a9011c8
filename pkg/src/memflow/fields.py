"""Small analytic vector fields used to calibrate integrators and instruments.

They expose the same surface as :class:`memflow.circuit.CircuitSystem`
(``dimension``, ``lower``, ``upper``, ``flow``, ``clamp``, ``pack``,
``unpack``) so every stepper and estimator accepts them unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class PointState:
    x: np.ndarray
    t: float = 0.0


class VectorField:
    def __init__(
        self,
        fn: Callable[[np.ndarray], np.ndarray],
        dimension: int,
        lower: Optional[np.ndarray] = None,
        upper: Optional[np.ndarray] = None,
        name: str = "field",
    ):
        self.fn = fn
        self.dimension = dimension
        self.lower = np.full(dimension, -np.inf) if lower is None else np.asarray(lower, float)
        self.upper = np.full(dimension, np.inf) if upper is None else np.asarray(upper, float)
        self.name = name

    def flow(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def pack(self, state) -> np.ndarray:
        if isinstance(state, PointState):
            return np.asarray(state.x, dtype=float).copy()
        return np.atleast_1d(np.asarray(state, dtype=float)).copy()

    def unpack(self, x: np.ndarray, t: float = 0.0) -> PointState:
        return PointState(np.array(x, dtype=float), float(t))

    def defects(self, x: np.ndarray) -> int:
        return 0


class LinearField(VectorField):
    """``dx/dt = A x``."""

    def __init__(self, matrix, name: str = "linear"):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        super().__init__(lambda x: self.matrix @ x, self.matrix.shape[0], name=name)


def double_well_2d(tilt: float = 0.0) -> VectorField:
    """Gradient flow of ``V = (x^2 - 1)^2 / 4 - tilt*x + y^2 / 2``.

    With ``tilt = 0``: saddle at the origin, minima at (+-1, 0).
    """

    def fn(p):
        x, y = p
        return np.array([x - x**3 + tilt, -y])

    return VectorField(fn, 2, name="double_well_2d")


def zero_field(dimension: int) -> VectorField:
    return VectorField(lambda x: np.zeros_like(x), dimension, name="zero")
