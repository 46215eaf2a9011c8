"""Seeded solver runs, scaling studies and JSON-lines result files."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from memflow.circuit import CircuitParams, CircuitSystem
from memflow.cnf import CnfFormula, count_defects, generate_planted_ksat, read_dimacs
from memflow.dynamics import (
    IntegratorConfig,
    NoiseConfig,
    RunOutcome,
    default_initial_state,
    integrate_until,
)
from memflow.instrumentation.critical import index_sequence
from memflow.instrumentation.lyapunov import lyapunov_max
from memflow.rng import MASK64, SplitMix64

SCHEMA = "memflow/1"


class SoundnessError(AssertionError):
    """A run claimed Solved but its assignment fails verification."""


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    ratio: float
    k: int = 3
    seed: int = 0

    def build(self) -> CnfFormula:
        return generate_planted_ksat(self.n, self.ratio, self.k, self.seed)[0]


@dataclass(frozen=True)
class RunConfig:
    source: object  # path string or GeneratorSpec
    params: CircuitParams = field(default_factory=CircuitParams)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    noise: Optional[NoiseConfig] = None
    seed: int = 0
    restarts: int = 1
    track_critical: bool = True
    lyapunov_horizon: Optional[float] = None
    instance_id: str = ""

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not isinstance(self.source, (str, GeneratorSpec)):
            raise TypeError("source must be a DIMACS path or a GeneratorSpec")

    def load_formula(self) -> CnfFormula:
        if isinstance(self.source, GeneratorSpec):
            return self.source.build()
        return read_dimacs(self.source)

    def echo(self) -> dict:
        if isinstance(self.source, GeneratorSpec):
            source = {"kind": "planted", **asdict(self.source)}
        else:
            source = {"kind": "file", "path": self.source}
        return {
            "source": source,
            "seed": self.seed,
            "restarts": self.restarts,
            "params": asdict(self.params),
            "params_text": self.params.to_text(),
            "integrator": asdict(self.integrator),
            "noise": None if self.noise is None else asdict(self.noise),
            "track_critical": self.track_critical,
            "lyapunov_horizon": self.lyapunov_horizon,
        }

    @classmethod
    def from_echo(cls, echo: dict, instance_id: str = "") -> RunConfig:
        src = dict(echo["source"])
        kind = src.pop("kind")
        source = GeneratorSpec(**src) if kind == "planted" else src["path"]
        noise = echo.get("noise")
        return cls(
            source=source,
            params=CircuitParams(**echo["params"]),
            integrator=IntegratorConfig(**echo["integrator"]),
            noise=None if noise is None else NoiseConfig(**noise),
            seed=echo["seed"],
            restarts=echo["restarts"],
            track_critical=echo.get("track_critical", True),
            lyapunov_horizon=echo.get("lyapunov_horizon"),
            instance_id=instance_id,
        )


@dataclass
class BenchResult:
    instance_id: str
    instance: dict
    verdict: str
    t_solved: Optional[float]
    steps: int
    restarts_used: int
    wall_time_seconds: float
    crossings_total: int
    defects_initial: int
    index_sequence: list
    lambda_max: Optional[float]
    assignment_hash: Optional[str]
    config: dict
    schema: str = SCHEMA

    def to_record(self) -> dict:
        return asdict(self)

    @classmethod
    def from_record(cls, record: dict) -> BenchResult:
        return cls(**record)


def assignment_vline(assignment) -> str:
    lits = [str(i) if val else str(-i) for i, val in enumerate(assignment, start=1)]
    return "v " + " ".join(lits) + " 0"


def assignment_hash(assignment) -> str:
    return hashlib.sha256(assignment_vline(assignment).encode()).hexdigest()


def describe_instance(config: RunConfig, formula: CnfFormula) -> dict:
    desc = {
        "n": formula.num_variables,
        "m": formula.num_clauses,
        "dimension": formula.num_variables + 2 * formula.num_clauses,
    }
    if isinstance(config.source, GeneratorSpec):
        desc.update(kind="planted", ratio=config.source.ratio, k=config.source.k, gen_seed=config.source.seed)
    else:
        desc.update(kind="file", path=config.source)
    return desc


def execute(config: RunConfig, formula: Optional[CnfFormula] = None) -> tuple[BenchResult, RunOutcome]:
    """Run with restarts; restart ``r`` draws from ``default_rng([seed, r])``."""
    formula = formula or config.load_formula()
    system = CircuitSystem(formula, config.params)
    start = time.perf_counter()
    outcome = None
    used = 0
    for r in range(config.restarts):
        used = r + 1
        rng = np.random.default_rng([config.seed, r])
        state0 = default_initial_state(system, rng)
        outcome = integrate_until(
            system, state0, config.integrator, config.noise, rng, config.track_critical
        )
        if outcome.solved:
            break

    digest = None
    lam = None
    if outcome.solved:
        if count_defects(formula, outcome.assignment) != 0:
            raise SoundnessError(f"run {config.instance_id!r} reported Solved on a violating assignment")
        digest = assignment_hash(outcome.assignment)
        if config.lyapunov_horizon:
            lrng = np.random.default_rng([config.seed, used - 1, 1])
            lam = lyapunov_max(
                system, outcome.final_state, config.lyapunov_horizon, config.integrator.dt, lrng
            ).lambda_max
    wall = time.perf_counter() - start

    result = BenchResult(
        instance_id=config.instance_id,
        instance=describe_instance(config, formula),
        verdict=outcome.verdict.value,
        t_solved=outcome.t_solved,
        steps=outcome.steps_taken,
        restarts_used=used,
        wall_time_seconds=wall,
        crossings_total=len(outcome.crossings),
        defects_initial=outcome.defects_initial,
        index_sequence=index_sequence(outcome.critical),
        lambda_max=None if lam is None else float(lam),
        assignment_hash=digest,
        config=config.echo(),
    )
    return result, outcome


def run_config(config: RunConfig) -> BenchResult:
    return execute(config)[0]


def rerun_record(record: dict) -> BenchResult:
    return run_config(RunConfig.from_echo(record["config"], record.get("instance_id", "")))


def same_outcome(a: BenchResult, b: BenchResult) -> bool:
    return (
        a.verdict == b.verdict
        and a.t_solved == b.t_solved
        and a.steps == b.steps
        and a.crossings_total == b.crossings_total
    )


# -- persistence ----------------------------------------------------------


def write_results(results: Iterable[BenchResult], path) -> int:
    """Append one JSON object per result."""
    count = 0
    try:
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            for result in results:
                fh.write(json.dumps(result.to_record(), sort_keys=True) + "\n")
                count += 1
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return count


def read_results(path) -> list[BenchResult]:
    with open(path, encoding="utf-8") as fh:
        return [BenchResult.from_record(json.loads(line)) for line in fh if line.strip()]


# -- scaling studies --------------------------------------------------------


def instance_seed(seed: int, n: int, i: int) -> int:
    return SplitMix64((seed ^ (n << 24) ^ i) & MASK64).next()


def scaling_configs(
    sizes: Sequence[int],
    ratio: float = 4.25,
    instances: int = 25,
    seed: int = 0,
    k: int = 3,
    **run_kw,
) -> list[RunConfig]:
    configs = []
    for n in sizes:
        for i in range(instances):
            s = instance_seed(seed, n, i)
            configs.append(
                RunConfig(GeneratorSpec(n, ratio, k, s), seed=s, instance_id=f"n{n}-i{i:03d}", **run_kw)
            )
    return configs


def run_many(configs: Sequence[RunConfig], jobs: int = 1, out=None, on_result=None) -> list[BenchResult]:
    """Run configs on a pool of ``jobs`` processes; results arrive by completion.

    When ``out`` is given each result is appended as soon as it arrives,
    from this process only.
    """
    results = []

    def collect(result):
        results.append(result)
        if out is not None:
            write_results([result], out)
        if on_result is not None:
            on_result(result)

    if jobs <= 1:
        for config in configs:
            collect(run_config(config))
        return results
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_config, c) for c in configs]
        for fut in as_completed(futures):
            collect(fut.result())
    return results


@dataclass(frozen=True)
class ScalingFit:
    sizes: list
    medians: list
    slope: float
    intercept: float
    r_squared: float


def fit_power_law(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares line through (log n, log median)."""
    pts = sorted((float(n), float(y)) for n, y in points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    sizes = [p[0] for p in pts]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be distinct")
    if any(n <= 0 or y <= 0 for n, y in pts):
        raise ValueError("sizes and medians must be positive (log undefined)")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    ss_res = float(np.sum((ly - (slope * lx + intercept)) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(sizes, [p[1] for p in pts], float(slope), float(intercept), r2)


@dataclass(frozen=True)
class BenchSummary:
    fit: Optional[ScalingFit]
    solve_rates: dict
    slope_max: float
    min_solve_rate: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.fit is None:
            return False
        rates_ok = all(rate >= self.min_solve_rate for rate in self.solve_rates.values())
        return rates_ok and self.fit.slope <= self.slope_max


def summarize(results: Iterable[BenchResult], slope_max: float = 3.0, min_solve_rate: float = 0.8) -> BenchSummary:
    """Median crossings of Solved runs per size, fitted against n.

    Timed-out runs are left out of the medians but count against the
    per-size solve rate.
    """
    by_size: dict[int, list[BenchResult]] = {}
    for r in results:
        by_size.setdefault(r.instance["n"], []).append(r)
    rates = {}
    points = []
    for n in sorted(by_size):
        runs = by_size[n]
        solved = [r.crossings_total for r in runs if r.verdict == "Solved"]
        rates[n] = len(solved) / len(runs)
        if solved:
            points.append((n, float(np.median(solved))))
    try:
        fit = fit_power_law(points)
        error = None
    except ValueError as exc:
        fit, error = None, str(exc)
    return BenchSummary(fit, rates, slope_max, min_solve_rate, error)
