"""Time integration of the circuit and run termination."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from memflow import integrators
from memflow.circuit import CircuitSystem, SolverState, digital_readout
from memflow.cnf import Assignment
from memflow.instrumentation.critical import InstantonTrace, SlowPointTracker, refine_critical_point
from memflow.instrumentation.crossings import CrossingDetector, CrossingEvent
from memflow.integrators import IntegrationFault  # noqa: F401  (re-export)

MAX_DT = 0.25


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.05
    t_max: float = 1e4
    record_stride: int = 10
    # None means 10 * dt
    persistence_window: Optional[float] = None
    method: str = "rk4"

    def __post_init__(self):
        if not 0 < self.dt <= MAX_DT:
            raise ValueError(f"dt must be in (0, {MAX_DT}], got {self.dt}")
        if self.t_max < self.dt:
            raise ValueError("t_max must be at least dt")
        if self.record_stride < 1:
            raise ValueError("record_stride must be positive")
        if self.persistence_window is not None and self.persistence_window < 0:
            raise ValueError("persistence_window must be nonnegative")
        if self.method not in ("rk4", "euler"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def window(self) -> float:
        return 10 * self.dt if self.persistence_window is None else self.persistence_window

    @property
    def window_steps(self) -> int:
        return math.ceil(self.window / self.dt - 1e-9)

    @property
    def max_steps(self) -> int:
        return math.ceil(self.t_max / self.dt - 1e-9)


@dataclass(frozen=True)
class NoiseConfig:
    theta: float = 0.0
    coupling: str = "voltages"

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be nonnegative")
        if self.coupling not in ("voltages", "all"):
            raise ValueError(f"coupling must be 'voltages' or 'all', got {self.coupling!r}")

    def mask(self, system) -> np.ndarray:
        mask = np.zeros(system.dimension, dtype=bool)
        if self.coupling == "all":
            mask[:] = True
        else:
            mask[: getattr(system, "n", system.dimension)] = True
        return mask


class Verdict(str, Enum):
    SOLVED = "Solved"
    TIMED_OUT = "TimedOut"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: SolverState
    defects: int


@dataclass
class RunOutcome:
    verdict: Verdict
    assignment: Optional[Assignment]
    t_solved: Optional[float]
    steps_taken: int
    samples: list[TrajectorySample]
    crossings: list[CrossingEvent]
    critical: InstantonTrace = field(default_factory=InstantonTrace)
    defects_initial: int = 0
    initial_readout: Optional[Assignment] = None
    final_state: Optional[SolverState] = None

    @property
    def solved(self) -> bool:
        return self.verdict is Verdict.SOLVED


# -- single steps ---------------------------------------------------------


def step_rk4(system, state, dt: float):
    x = integrators.rk4(system, system.pack(state), dt)
    return system.unpack(x, state.t + dt)


def step_euler(system, state, dt: float):
    x = integrators.euler(system, system.pack(state), dt)
    return system.unpack(x, state.t + dt)


def step_euler_maruyama(system, state, dt: float, noise: NoiseConfig, rng):
    x = integrators.euler_maruyama(system, system.pack(state), dt, noise.theta, noise.mask(system), rng)
    return system.unpack(x, state.t + dt)


def default_initial_state(system: CircuitSystem, rng) -> SolverState:
    """Voltages uniform in (-1, 1); short memory 0.5, long memory 1."""
    v = rng.uniform(-1.0, 1.0, system.n)
    return SolverState(v, np.full(system.m, 0.5), np.ones(system.m), 0.0)


# -- runs -----------------------------------------------------------------


def _stepper(system, config: IntegratorConfig, noise: Optional[NoiseConfig], rng):
    if noise is not None:
        if rng is None and noise.theta > 0:
            raise ValueError("noisy integration needs an rng")
        mask = noise.mask(system)
        return lambda x: integrators.euler_maruyama(system, x, config.dt, noise.theta, mask, rng)
    if config.method == "euler":
        return lambda x: integrators.euler(system, x, config.dt)
    return lambda x: integrators.rk4(system, x, config.dt)


def integrate_until(
    system: CircuitSystem,
    state0: SolverState,
    config: IntegratorConfig,
    noise: Optional[NoiseConfig] = None,
    rng=None,
    track_critical: bool = False,
) -> RunOutcome:
    """Integrate until the readout stays satisfying for the persistence window.

    With ``noise`` given the run uses Euler-Maruyama (plain Euler when
    theta is 0); otherwise ``config.method``. Solved runs report
    ``t_solved`` as the time at which the window completes. Crossings are
    detected on every step, independently of ``record_stride``.
    """
    step = _stepper(system, config, noise, rng)
    dt, t0 = config.dt, state0.t
    x = system.clamp(system.pack(state0))
    need = config.window_steps

    detector = CrossingDetector(system.n)
    tracker = SlowPointTracker(system) if track_critical else None
    detector.feed(t0, x[: system.n])

    defects = system.defects(x)
    samples = [TrajectorySample(t0, system.unpack(x, t0), defects)]
    if tracker:
        tracker.feed(t0, x)
    initial_readout = digital_readout(samples[0].state)
    streak = 1 if defects == 0 else 0
    k = 0
    solved = bool(streak) and need == 0

    while not solved and k < config.max_steps:
        x = step(x)
        k += 1
        t = t0 + k * dt
        detector.feed(t, x[: system.n])
        defects = system.defects(x)
        streak = streak + 1 if defects == 0 else 0
        solved = streak > need
        if k % config.record_stride == 0:
            samples.append(TrajectorySample(t, system.unpack(x, t), defects))
            if tracker:
                tracker.feed(t, x)

    t = t0 + k * dt
    if samples[-1].t != t:
        samples.append(TrajectorySample(t, system.unpack(x, t), defects))
        if tracker:
            tracker.feed(t, x)
    detector.finish()
    final = samples[-1].state

    trace = InstantonTrace()
    if tracker:
        trace = tracker.finish()
        if solved:
            tracker.add(refine_critical_point(system, final))
            trace = tracker.trace

    return RunOutcome(
        verdict=Verdict.SOLVED if solved else Verdict.TIMED_OUT,
        assignment=digital_readout(final) if solved else None,
        t_solved=t if solved else None,
        steps_taken=k,
        samples=samples,
        crossings=detector.events,
        critical=trace,
        defects_initial=samples[0].defects,
        initial_readout=initial_readout,
        final_state=final,
    )


def solve(system: CircuitSystem, config: IntegratorConfig, seed: int, noise=None, track_critical=False) -> RunOutcome:
    """One seeded run from :func:`default_initial_state`."""
    rng = np.random.default_rng(seed)
    state0 = default_initial_state(system, rng)
    return integrate_until(system, state0, config, noise, rng, track_critical)


# -- trajectory dump ------------------------------------------------------


def trajectory_header(n: int, m: int) -> list[str]:
    return (
        ["t"]
        + [f"v_{i}" for i in range(1, n + 1)]
        + [f"xs_{j}" for j in range(1, m + 1)]
        + [f"xl_{j}" for j in range(1, m + 1)]
        + ["defects"]
    )


def write_trajectory_csv(samples, path) -> None:
    first = samples[0].state
    n, m = len(first.v), len(first.xs)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trajectory_header(n, m))
        for s in samples:
            row = [repr(float(s.t))]
            row += [repr(float(a)) for a in np.concatenate([s.state.v, s.state.xs, s.state.xl])]
            row.append(str(s.defects))
            writer.writerow(row)


def read_trajectory_csv(path) -> list[TrajectorySample]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = sum(1 for h in header if h.startswith("v_"))
        m = sum(1 for h in header if h.startswith("xs_"))
        out = []
        for row in reader:
            vals = np.array([float(a) for a in row[1:-1]])
            state = SolverState(vals[:n], vals[n : n + m], vals[n + m :], float(row[0]))
            out.append(TrajectorySample(float(row[0]), state, int(row[-1])))
    return out
