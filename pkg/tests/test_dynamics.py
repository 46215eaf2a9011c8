import math

import numpy as np
import pytest

from memflow.circuit import CircuitSystem, SolverState
from memflow.cnf import count_defects, generate_planted_ksat
from memflow.dynamics import (
    IntegrationFault,
    IntegratorConfig,
    NoiseConfig,
    Verdict,
    default_initial_state,
    integrate_until,
    read_trajectory_csv,
    solve,
    step_euler,
    step_euler_maruyama,
    step_rk4,
    write_trajectory_csv,
)
from memflow.fields import LinearField, PointState, VectorField, zero_field


def test_rk4_linear_decay():
    out = step_rk4(LinearField([[-1.0]]), PointState(np.array([1.0])), 0.1)
    h = 0.1
    # RK4 on a linear field is the degree-4 Taylor polynomial of exp(-h)
    assert out.x[0] == pytest.approx(1 - h + h**2 / 2 - h**3 / 6 + h**4 / 24, abs=1e-15)
    assert out.x[0] == pytest.approx(0.9048375, abs=1e-12)
    # truncation error is the h^5 remainder term
    assert abs(out.x[0] - math.exp(-h)) <= h**5 / 120
    assert out.t == pytest.approx(0.1)


def test_zero_field_leaves_state():
    x0 = np.array([0.3, -2.0, 7.0])
    out = step_rk4(zero_field(3), PointState(x0, 1.0), 0.05)
    assert np.array_equal(out.x, x0) and out.t == pytest.approx(1.05)


def test_step_from_equilibrium_keeps_voltages(planted20):
    system, plant = planted20
    state = system.solution_state(plant)
    out = step_rk4(system, state, 0.05)
    assert np.array_equal(out.v, state.v)


def test_non_finite_derivative_names_coordinate():
    bad = VectorField(lambda x: np.array([0.0, np.inf]), 2)
    with pytest.raises(IntegrationFault) as info:
        step_rk4(bad, PointState(np.zeros(2)), 0.1)
    assert info.value.coordinate == 1


def test_dt_limit():
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.5)


def test_theta_zero_matches_euler_bytes(planted20):
    system, _ = planted20
    state = default_initial_state(system, np.random.default_rng(0))
    a = step_euler(system, state, 0.05)
    b = step_euler_maruyama(system, state, 0.05, NoiseConfig(0.0), np.random.default_rng(1))
    assert system.pack(a).tobytes() == system.pack(b).tobytes()


def test_voltage_noise_leaves_memories_deterministic(planted20):
    system, _ = planted20
    state = default_initial_state(system, np.random.default_rng(0))
    det = step_euler(system, state, 0.05)
    noisy = step_euler_maruyama(system, state, 0.05, NoiseConfig(0.1), np.random.default_rng(5))
    assert np.array_equal(det.xs, noisy.xs) and np.array_equal(det.xl, noisy.xl)
    assert not np.array_equal(det.v, noisy.v)


def test_euler_maruyama_increment_variance():
    theta, dt = 0.3, 0.01
    field = zero_field(1)
    rng = np.random.default_rng(8)
    incs = np.empty(100_000)
    state = PointState(np.zeros(1))
    for i in range(len(incs)):
        incs[i] = step_euler_maruyama(field, state, dt, NoiseConfig(theta, "all"), rng).x[0]
    assert np.var(incs) == pytest.approx(2 * theta * dt, rel=0.05)


def test_planted_instance_is_solved(planted20):
    system, _ = planted20
    out = solve(system, IntegratorConfig(), seed=3)
    assert out.verdict is Verdict.SOLVED
    assert count_defects(system.formula, out.assignment) == 0


def test_contradiction_times_out(contradiction):
    out = solve(CircuitSystem(contradiction), IntegratorConfig(t_max=100), seed=0)
    assert out.verdict is Verdict.TIMED_OUT
    assert out.assignment is None and out.t_solved is None
    assert out.steps_taken == 2000


def test_start_at_plant_solves_after_one_window(planted20):
    system, plant = planted20
    config = IntegratorConfig()
    out = integrate_until(system, system.solution_state(plant), config)
    assert out.solved
    assert out.t_solved == pytest.approx(config.window)
    assert out.crossings == []


def test_initial_state_determinism(planted20):
    system, _ = planted20
    a = default_initial_state(system, np.random.default_rng(4))
    b = default_initial_state(system, np.random.default_rng(4))
    c = default_initial_state(system, np.random.default_rng(5))
    assert a == b
    assert not np.array_equal(a.v, c.v)
    assert np.all(np.abs(a.v) < 1) and np.all(a.xs == 0.5) and np.all(a.xl == 1.0)


def test_runs_are_deterministic():
    f, _ = generate_planted_ksat(30, 4.25, 3, 9)
    system = CircuitSystem(f)
    a = solve(system, IntegratorConfig(), seed=2)
    b = solve(system, IntegratorConfig(), seed=2)
    assert (a.t_solved, a.steps_taken, a.crossings) == (b.t_solved, b.steps_taken, b.crossings)


def test_samples_follow_stride(planted20):
    system, _ = planted20
    out = solve(system, IntegratorConfig(record_stride=3, t_max=1.0), seed=1)
    ts = [s.t for s in out.samples]
    assert ts[0] == 0.0 and ts[-1] == pytest.approx(out.steps_taken * 0.05)
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_trajectory_csv_round_trip(tmp_path, planted20):
    system, _ = planted20
    out = solve(system, IntegratorConfig(record_stride=1, t_max=2.0), seed=1)
    path = tmp_path / "trace.csv"
    write_trajectory_csv(out.samples, path)
    back = read_trajectory_csv(path)
    assert path.read_text().splitlines()[0].startswith("t,v_1,")
    assert len(back) == len(out.samples)
    for a, b in zip(out.samples, back):
        assert a.t == b.t and a.defects == b.defects and a.state == b.state
