"""Critical points of box-constrained flows: refinement, index, visit traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from memflow.circuit import jacobian_fd, project_to_tangent_cone

EPS_CENTER = 1e-6
SLOW_TOL = 1e-3
SLOW_RUN = 5
DEDUP_DIST = 1e-4


@dataclass(frozen=True)
class CriticalPointReport:
    location: object  # SolverState for circuits, PointState for test fields
    residual: float
    index: int
    center_dims: int
    t: float = 0.0
    stable_dims: int = 0


@dataclass
class InstantonTrace:
    visits: list[CriticalPointReport] = field(default_factory=list)

    @property
    def step_count(self) -> int:
        return max(0, len(self.visits) - 1)


def index_of(jacobian: np.ndarray, eps_c: float = EPS_CENTER) -> tuple[int, int]:
    """(number of eigenvalues with Re > eps_c, number with |Re| <= eps_c)."""
    index, center, _ = eigen_counts(jacobian, eps_c)
    return index, center


def eigen_counts(jacobian: np.ndarray, eps_c: float = EPS_CENTER) -> tuple[int, int, int]:
    jac = np.asarray(jacobian, dtype=float)
    if not np.isfinite(jac).all():
        raise ValueError("jacobian has non-finite entries")
    re = np.linalg.eigvals(jac).real
    unstable = int(np.count_nonzero(re > eps_c))
    center = int(np.count_nonzero(np.abs(re) <= eps_c))
    return unstable, center, len(re) - unstable - center


def residual(system, x: np.ndarray) -> float:
    f = project_to_tangent_cone(system.flow(x), x, system.lower, system.upper)
    return float(np.max(np.abs(f))) if len(f) else 0.0


def active_faces(system, x: np.ndarray, f: Optional[np.ndarray] = None) -> np.ndarray:
    """Coordinates pinned to a face because the flow pushes them outward."""
    if f is None:
        f = system.flow(x)
    return ((x <= system.lower) & (f < 0)) | ((x >= system.upper) & (f > 0))


def face_jacobian(system, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Jacobian of the clamped flow: pinned coordinates get zero rows."""
    jac = jacobian_fd(system, x, h)
    jac[active_faces(system, x)] = 0.0
    return jac


def _drifting(system, x, f, jac, eps):
    """Coordinates with no self-restoring term that are moving toward a face.

    Such a coordinate travels monotonically until the box stops it, so
    Newton cannot balance it from inside.
    """
    toward_low = (f < 0) & np.isfinite(system.lower) & (x > system.lower)
    toward_high = (f > 0) & np.isfinite(system.upper) & (x < system.upper)
    return (np.abs(np.diag(jac)) <= eps) & (toward_low | toward_high)


def refine_critical_point(
    system,
    guess,
    tol: float = 1e-9,
    max_iter: int = 50,
    eps_c: float = EPS_CENTER,
    h: float = 1e-6,
    seed: int = 0,
) -> Optional[CriticalPointReport]:
    """Damped Newton on the clamped flow, starting at ``guess``.

    Pinned coordinates are left out of the Newton system. Drifting
    coordinates (see :func:`_drifting`) are held fixed until the rest has
    converged, then moved onto the face they head for. Returns None when
    the residual does not drop to ``tol`` within ``max_iter`` iterations.
    """
    t = float(getattr(guess, "t", 0.0))
    x = system.clamp(system.pack(guess))
    retried = False
    rng = np.random.default_rng(seed)

    for _ in range(max_iter):
        raw = system.flow(x)
        proj = project_to_tangent_cone(raw, x, system.lower, system.upper)
        if np.max(np.abs(proj), initial=0.0) <= tol:
            break
        jac = jacobian_fd(system, x, h)
        drift = _drifting(system, x, raw, jac, eps_c)
        rest = ~active_faces(system, x, raw) & ~drift
        r_rest = np.max(np.abs(proj[rest]), initial=0.0)
        if r_rest <= tol:
            x = x.copy()
            low = drift & (raw < 0)
            high = drift & (raw > 0)
            x[low] = system.lower[low]
            x[high] = system.upper[high]
            continue

        step = np.zeros_like(x)
        step[rest] = np.linalg.lstsq(jac[np.ix_(rest, rest)], -raw[rest], rcond=None)[0]
        damping = 1.0
        while damping >= 2.0**-20:
            candidate = system.clamp(x + damping * step)
            f_c = project_to_tangent_cone(system.flow(candidate), candidate, system.lower, system.upper)
            if np.max(np.abs(f_c[rest]), initial=0.0) < r_rest:
                x = candidate
                break
            damping *= 0.5
        else:
            if retried:
                return None
            retried = True
            x = system.clamp(x + 1e-7 * rng.standard_normal(len(x)))
    else:
        return None

    r = residual(system, x)
    if r > tol:
        return None
    unstable, center, stable = eigen_counts(face_jacobian(system, x, h), eps_c)
    return CriticalPointReport(system.unpack(x, t), r, unstable, center, t, stable)


class SlowPointTracker:
    """Collects critical-point visits from a stream of trajectory samples.

    A visit is a run of at least ``min_run`` consecutive samples with clamped
    flow residual below ``slow_tol``; the slowest sample of the run seeds
    :func:`refine_critical_point`. A visit within ``dedup`` (max-norm) of the
    previous one is merged into it.
    """

    def __init__(self, system, slow_tol=SLOW_TOL, min_run=SLOW_RUN, dedup=DEDUP_DIST, **refine_kw):
        self.system = system
        self.slow_tol = slow_tol
        self.min_run = min_run
        self.dedup = dedup
        self.refine_kw = refine_kw
        self.trace = InstantonTrace()
        self._run = 0
        self._best = None

    def feed(self, t: float, x: np.ndarray) -> None:
        r = residual(self.system, x)
        if r < self.slow_tol:
            self._run += 1
            if self._best is None or r < self._best[0]:
                self._best = (r, t, x.copy())
            return
        self._close()

    def _close(self):
        if self._run >= self.min_run and self._best is not None:
            _, t, x = self._best
            self.add(refine_critical_point(self.system, self.system.unpack(x, t), **self.refine_kw))
        self._run = 0
        self._best = None

    def add(self, report: Optional[CriticalPointReport]) -> None:
        if report is None:
            return
        if self.trace.visits:
            last = self.system.pack(self.trace.visits[-1].location)
            here = self.system.pack(report.location)
            if np.max(np.abs(last - here)) < self.dedup:
                return
        self.trace.visits.append(report)

    def finish(self) -> InstantonTrace:
        self._close()
        return self.trace


def index_sequence(trace: InstantonTrace) -> list[int]:
    return [v.index for v in trace.visits]


def is_monotone(indexes: list[int]) -> bool:
    """True when every visit is at least as stable as the one before."""
    return all(b <= a for a, b in zip(indexes, indexes[1:]))
