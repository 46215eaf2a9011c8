import numpy as np
import pytest

from memflow.circuit import (
    CircuitParams,
    CircuitSystem,
    SolverState,
    StateContractError,
    clamp_state,
    digital_readout,
    jacobian_fd,
    state_defects,
)
from memflow.cnf import CnfFormula, generate_planted_ksat
from memflow.fields import LinearField
from memflow import integrators


@pytest.fixture
def or3():
    return CircuitSystem(CnfFormula.from_ints(3, [[1, 2, 3]]))


@pytest.mark.parametrize("v, expected", [((1, 1, 1), 0.0), ((-1, -1, -1), 1.0), ((0, 0, 0), 0.5)])
def test_clause_value_examples(or3, v, expected):
    assert or3.clause_value(0, np.array(v, float)) == expected


def test_clause_value_bad_index(or3):
    with pytest.raises(IndexError):
        or3.clause_value(1, np.zeros(3))


def test_params_validation_and_text_round_trip():
    with pytest.raises(ValueError):
        CircuitParams(gamma=0.01, delta=0.05)
    p = CircuitParams(alpha=2.5, zeta=0.0, xl_max=123.0)
    assert CircuitParams.from_text(p.to_text()) == p


def test_equilibrium_at_satisfying_rails(planted20):
    system, plant = planted20
    f = system.flow_field(system.solution_state(plant))
    assert np.all(f[: system.n] == 0.0)


def test_unit_clause_pushes_toward_rail():
    system = CircuitSystem(CnfFormula.from_ints(1, [[1]]))
    state = SolverState(np.array([-1.0]), np.array([1.0]), np.array([1.0]))
    assert system.flow_field(state)[0] == pytest.approx(0.5, abs=1e-15)


def test_short_memory_still_at_threshold(or3):
    # C = 0.5 * (1 - v) at equal voltages; v = 0.5 gives C = gamma
    state = SolverState(np.full(3, 0.5), np.array([0.3]), np.array([2.0]))
    assert or3.flow_field(state)[3] == 0.0


def test_flow_rejects_out_of_box_state(or3):
    with pytest.raises(StateContractError):
        or3.flow_field(SolverState(np.array([1.5, 0, 0]), np.array([0.5]), np.array([1.0])))
    with pytest.raises(StateContractError):
        or3.flow_field(SolverState(np.zeros(2), np.array([0.5]), np.array([1.0])))


def test_clamp_examples():
    params = CircuitParams(xl_max=10.0)
    s = SolverState(np.array([1.3, -0.2]), np.array([0.5]), np.array([0.2]))
    c = clamp_state(s, params)
    assert c.v.tolist() == [1.0, -0.2]
    assert c.xl.tolist() == [1.0]
    inside = SolverState(np.array([0.1, -0.2]), np.array([0.5]), np.array([3.0]))
    assert clamp_state(inside, params) == inside


def test_clamp_is_idempotent():
    rng = np.random.default_rng(0)
    params = CircuitParams(xl_max=50.0)
    for _ in range(100):
        s = SolverState(rng.normal(0, 3, 4), rng.normal(0, 3, 2), rng.normal(0, 100, 2))
        once = clamp_state(s, params)
        assert clamp_state(once, params) == once


def test_jacobian_fd_on_linear_field():
    a = np.array([[1.0, -2.0, 0.5], [0.0, 3.0, 1.0], [-1.0, 0.25, -4.0]])
    jac = jacobian_fd(LinearField(a), np.array([0.3, -0.1, 0.7]))
    assert np.max(np.abs(jac - a)) <= 1e-6


def test_jacobian_fd_step_refinement(planted20):
    system, _ = planted20
    rng = np.random.default_rng(1)
    x = system.clamp(np.concatenate([rng.uniform(-0.9, 0.9, system.n), rng.uniform(0.2, 0.8, system.m), np.full(system.m, 3.0)]))
    j1 = jacobian_fd(system, x, 1e-6)
    j2 = jacobian_fd(system, x, 5e-7)
    assert np.max(np.abs(j1 - j2)) <= 1e-4 * max(1.0, np.max(np.abs(j1)))


def test_voltage_block_has_no_positive_diagonal_at_solution(planted20):
    system, plant = planted20
    jac = jacobian_fd(system, system.solution_state(plant))
    assert np.all(np.diag(jac)[: system.n] <= 0)


@pytest.mark.parametrize(
    "v, expected",
    [((0.9, -0.2), (True, False)), ((0.0, 0.0), (False, False)), ((-1.0, 1.0), (False, True))],
)
def test_digital_readout(v, expected):
    assert digital_readout(SolverState(np.array(v), np.zeros(0), np.zeros(0))) == expected


def test_readout_flips_exactly_at_zero():
    for v in (-1e-12, 0.0, 5e-324, 1e-12):
        state = SolverState(np.array([v]), np.zeros(0), np.zeros(0))
        assert digital_readout(state) == (v > 0,)


def test_state_defects_examples(planted20, contradiction):
    system, plant = planted20
    assert state_defects(system, system.solution_state(plant)) == 0
    c = CircuitSystem(contradiction)
    for v in (-1.0, -0.3, 0.0, 0.4, 1.0):
        assert state_defects(c, SolverState(np.array([v]), np.full(2, 0.5), np.ones(2))) >= 1


def test_flow_locality():
    f = CnfFormula.from_ints(6, [[1, 2, -3], [-2, 3, 4], [5, -6, 1]])
    system = CircuitSystem(f)
    rng = np.random.default_rng(3)
    x = np.concatenate([rng.uniform(-0.9, 0.9, 6), rng.uniform(0.1, 0.9, 3), rng.uniform(1, 5, 3)])
    jac = jacobian_fd(system, x)
    share = np.zeros((6, 6), dtype=bool)
    for clause in f.to_ints():
        idx = [abs(l) - 1 for l in clause]
        share[np.ix_(idx, idx)] = True
    assert np.all(jac[:6, :6][~share] == 0.0)
    # a voltage is only driven by the memories of its own clauses
    for i in range(6):
        own = [j for j, c in enumerate(f.to_ints()) if any(abs(l) - 1 == i for l in c)]
        other = [j for j in range(3) if j not in own]
        assert np.all(jac[i, 6 + np.array(other, dtype=int)] == 0.0)


def test_boundedness_fuzz():
    f, _ = generate_planted_ksat(8, 4.25, 3, 2)
    system = CircuitSystem(f, CircuitParams(xl_max=100.0))
    rng = np.random.default_rng(4)
    x = system.clamp(rng.normal(0, 2, system.dimension))
    for step in range(100_000):
        if step % 1000 == 0:
            x = system.clamp(rng.normal(0, 50, system.dimension))
        x = integrators.euler(system, x, float(rng.uniform(1e-3, 0.25)))
        assert system.in_box(x)
