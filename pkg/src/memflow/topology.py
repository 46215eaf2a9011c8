"""Index sums over zeros of analytic vector fields on small manifolds.

Each built-in family ships with its complete list of zeros, so the
Poincare-Hopf sum and the Morse signed sum can be checked exactly as the
family parameter is swept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

DEGENERACY_TOL = 1e-9
ZERO_TOL = 1e-9
FD_STEP = 1e-6

EULER_CHARACTERISTIC = {"sphere": 2, "torus": 0, "circle": 0}


class DegenerateZero(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Local coordinates ``u`` with parametrization ``to_manifold(u)``."""

    name: str
    to_local: Callable[[np.ndarray], np.ndarray]
    to_manifold: Callable[[np.ndarray], np.ndarray]
    covers: Callable[[np.ndarray], bool]


@dataclass(frozen=True)
class ZeroPoint:
    location: tuple
    sign_index: int
    morse_index: Optional[int] = None


@dataclass
class AnalyticVectorField:
    name: str
    domain: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    known_zeros: list = field(default_factory=list)
    charts: list = field(default_factory=list)
    parameter: float = 0.0
    # Hessian of the potential, for gradient fields on a euclidean box
    potential_hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, p) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.evaluator(np.asarray(p, dtype=float)), dtype=float))

    def chart_for(self, p) -> Chart:
        for chart in self.charts:
            if chart.covers(np.asarray(p, dtype=float)):
                return chart
        raise ValueError(f"no chart of {self.name} covers {p}")


def local_field(vf: AnalyticVectorField, chart: Chart, u: np.ndarray) -> np.ndarray:
    """The field in chart coordinates: solve ``D(to_manifold) w = V``."""
    u = np.asarray(u, dtype=float)
    p = chart.to_manifold(u)
    v = vf(p)
    if len(v) == len(u):
        # chart coordinates coincide with the ambient ones
        return v
    cols = []
    for k in range(len(u)):
        e = np.zeros_like(u)
        e[k] = FD_STEP
        cols.append((chart.to_manifold(u + e) - chart.to_manifold(u - e)) / (2 * FD_STEP))
    frame = np.column_stack(cols)
    return np.linalg.lstsq(frame, v, rcond=None)[0]


def chart_jacobian(vf: AnalyticVectorField, chart: Chart, location) -> np.ndarray:
    u0 = chart.to_local(np.asarray(location, dtype=float))
    d = len(u0)
    jac = np.empty((d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = FD_STEP
        jac[:, k] = (local_field(vf, chart, u0 + e) - local_field(vf, chart, u0 - e)) / (2 * FD_STEP)
    return jac


def zero_index(vf: AnalyticVectorField, location, chart: Optional[Chart] = None) -> int:
    """Sign of the Jacobian determinant of the field at a zero, in a chart."""
    if np.max(np.abs(vf(location))) > ZERO_TOL:
        raise ValueError(f"{location} is not a zero of {vf.name}")
    chart = chart or vf.chart_for(location)
    det = np.linalg.det(chart_jacobian(vf, chart, location))
    if abs(det) <= DEGENERACY_TOL:
        raise DegenerateZero(f"degenerate zero of {vf.name} at {location} (det={det:.3g})")
    return 1 if det > 0 else -1


def zeros_with_index(vf: AnalyticVectorField) -> list[ZeroPoint]:
    out = []
    for loc in vf.known_zeros:
        morse = morse_index(vf, loc) if vf.potential_hessian is not None else None
        out.append(ZeroPoint(tuple(np.atleast_1d(loc)), zero_index(vf, loc), morse))
    return out


def poincare_hopf_sum(vf: AnalyticVectorField) -> int:
    if vf.domain not in EULER_CHARACTERISTIC:
        raise ValueError(f"{vf.domain} is not a compact surface with a known Euler characteristic")
    return sum(zero_index(vf, z) for z in vf.known_zeros)


def morse_index(vf: AnalyticVectorField, location) -> int:
    """Number of negative Hessian eigenvalues of the potential at a zero."""
    hess = np.atleast_2d(vf.potential_hessian(np.asarray(location, dtype=float)))
    eig = np.linalg.eigvalsh(hess)
    if np.min(np.abs(eig)) <= DEGENERACY_TOL:
        raise DegenerateZero(f"degenerate critical point of {vf.name} at {location}")
    return int(np.count_nonzero(eig < 0))


def morse_signed_sum(vf: AnalyticVectorField, zeros: Optional[Sequence] = None) -> int:
    if vf.potential_hessian is None:
        raise ValueError(f"{vf.name} is not a gradient field with a known potential")
    zeros = vf.known_zeros if zeros is None else zeros
    return sum((-1) ** morse_index(vf, z) for z in zeros)


# -- charts -----------------------------------------------------------------


def _stereographic(pole: float) -> Chart:
    """Projection from (0, 0, pole) onto the equatorial plane."""

    def to_local(p):
        return p[:2] / (1.0 - pole * p[2])

    def to_manifold(u):
        s = u @ u
        return np.array([2 * u[0], 2 * u[1], pole * (s - 1.0)]) / (1.0 + s)

    name = "stereo_north" if pole > 0 else "stereo_south"
    return Chart(name, to_local, to_manifold, lambda p: 1.0 - pole * p[2] > 0.1)


SPHERE_CHARTS = [_stereographic(1.0), _stereographic(-1.0)]


def _identity_chart(name="identity") -> Chart:
    return Chart(name, lambda p: np.atleast_1d(p).astype(float), lambda u: u, lambda p: True)


def _angle_chart(center: np.ndarray) -> Chart:
    """Angles wrapped into (center - pi, center + pi], per coordinate."""

    def to_local(p):
        return center + np.mod(np.atleast_1d(p) - center + np.pi, 2 * np.pi) - np.pi

    def covers(p):
        return bool(np.all(np.abs(to_local(p) - center) < np.pi - 0.1))

    name = "angles_" + "_".join("0" if c == 0 else "pi" for c in center)
    return Chart(name, to_local, lambda u: u, covers)


def _angle_charts(dim: int) -> list[Chart]:
    return [_angle_chart(np.array(c)) for c in itertools.product((0.0, np.pi), repeat=dim)]


# -- built-in families ----------------------------------------------------


def sphere_height_gradient(tilt: float = 0.0) -> AnalyticVectorField:
    """Tangential gradient of the height ``a . p`` with ``a = (tilt, 0, 1)``."""
    a = np.array([tilt, 0.0, 1.0])

    def evaluate(p):
        return a - (a @ p) * p

    pole = a / np.linalg.norm(a)
    return AnalyticVectorField(
        "sphere", "sphere", evaluate, [pole, -pole], SPHERE_CHARTS, tilt
    )


def torus_morse_gradient(shift: float = 0.0) -> AnalyticVectorField:
    """Gradient of ``cos(t - s) + 2 cos(f + s)`` in angle coordinates (t, f)."""

    def evaluate(p):
        return np.array([-np.sin(p[0] - shift), -2.0 * np.sin(p[1] + shift)])

    zeros = [
        np.array([shift + i * np.pi, -shift + j * np.pi]) for i in (0, 1) for j in (0, 1)
    ]
    return AnalyticVectorField("torus", "torus", evaluate, zeros, _angle_charts(2), shift)


def circle_rotation(wobble: float = 0.0) -> AnalyticVectorField:
    """``d(angle)/dt = 1 + wobble * sin(angle)``; zero-free for |wobble| < 1."""
    if abs(wobble) >= 1:
        raise ValueError("wobble must satisfy |wobble| < 1")

    def evaluate(p):
        return np.array([1.0 + wobble * np.sin(p[0])])

    return AnalyticVectorField("circle", "circle", evaluate, [], _angle_charts(1), wobble)


def double_well_1d(tilt: float = 0.0) -> AnalyticVectorField:
    """Flow ``-V'`` for ``V = x^4/4 - x^2/2 - tilt*x``; three zeros for small tilt."""

    def evaluate(p):
        x = p[0]
        return np.array([x - x**3 + tilt])

    roots = np.roots([1.0, 0.0, -1.0, -tilt])
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-12)
    zeros = [np.array([_polish_cubic_root(r, tilt)]) for r in real]
    return AnalyticVectorField(
        "doublewell",
        "euclidean-box",
        evaluate,
        zeros,
        [_identity_chart()],
        tilt,
        potential_hessian=lambda p: np.array([[3 * p[0] ** 2 - 1.0]]),
    )


def _polish_cubic_root(x: float, tilt: float) -> float:
    for _ in range(5):
        f = x**3 - x - tilt
        x -= f / (3 * x**2 - 1.0)
    return x


def single_well_1d(tilt: float = 0.0) -> AnalyticVectorField:
    """Flow ``-V'`` for ``V = x^2/2 - tilt*x``."""
    return AnalyticVectorField(
        "singlewell",
        "euclidean-box",
        lambda p: np.array([tilt - p[0]]),
        [np.array([tilt])],
        [_identity_chart()],
        tilt,
        potential_hessian=lambda p: np.array([[1.0]]),
    )


def double_well_2d_field(tilt: float = 0.0) -> AnalyticVectorField:
    """Flow ``-grad V`` for ``V = (x^2-1)^2/4 - tilt*x + y^2/2``."""
    inner = double_well_1d(tilt)

    def evaluate(p):
        return np.array([p[0] - p[0] ** 3 + tilt, -p[1]])

    zeros = [np.array([z[0], 0.0]) for z in inner.known_zeros]
    return AnalyticVectorField(
        "doublewell2d",
        "euclidean-box",
        evaluate,
        zeros,
        [_identity_chart()],
        tilt,
        potential_hessian=lambda p: np.array([[3 * p[0] ** 2 - 1.0, 0.0], [0.0, 1.0]]),
    )


# -- sweeps ---------------------------------------------------------------

FAMILIES = {
    "sphere": (sphere_height_gradient, (-2.0, 2.0), 2, "poincare_hopf"),
    "torus": (torus_morse_gradient, (0.0, 1.5), 0, "poincare_hopf"),
    "circle": (circle_rotation, (-0.9, 0.9), 0, "poincare_hopf"),
    "doublewell": (double_well_1d, (-0.3, 0.3), 1, "morse"),
}


@dataclass(frozen=True)
class TopoCheckRow:
    field: str
    parameter: float
    zero_count: int
    signed_sum: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.signed_sum == self.expected


def sweep_parameters(name: str, count: int) -> np.ndarray:
    lo, hi = FAMILIES[name][1]
    return np.linspace(lo, hi, count)


def check_family(name: str, count: int = 20) -> list[TopoCheckRow]:
    if name not in FAMILIES:
        raise KeyError(f"unknown field family {name!r}")
    factory, _, expected, kind = FAMILIES[name]
    rows = []
    for param in sweep_parameters(name, count):
        vf = factory(float(param))
        total = poincare_hopf_sum(vf) if kind == "poincare_hopf" else morse_signed_sum(vf)
        rows.append(TopoCheckRow(name, float(param), len(vf.known_zeros), total, expected))
    return rows
