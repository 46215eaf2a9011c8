"""Continuous-time memcomputing SAT dynamics with topological instrumentation."""

from memflow.circuit import (
    CircuitParams,
    CircuitSystem,
    SolverState,
    clamp_state,
    digital_readout,
    jacobian_fd,
    state_defects,
)
from memflow.cnf import (
    Clause,
    CnfFormula,
    Literal,
    brute_force_solve,
    count_defects,
    emit_dimacs,
    generate_planted_ksat,
    parse_dimacs,
)
from memflow.dynamics import (
    IntegratorConfig,
    NoiseConfig,
    RunOutcome,
    TrajectorySample,
    Verdict,
    default_initial_state,
    integrate_until,
    solve,
    step_euler,
    step_euler_maruyama,
    step_rk4,
)

__version__ = "0.1.0"
