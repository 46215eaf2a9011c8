"""Self-organizing logic gate circuit for CNF formulas.

The phase space is ``x = (v, xs, xl)``: one voltage per variable in
[-1, 1], then a short-term and a long-term memory per clause. Voltage
threshold 0 is the digital decision boundary (v > 0 reads true).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

import numpy as np

from memflow.cnf import Assignment, CnfFormula


@dataclass(frozen=True)
class CircuitParams:
    alpha: float = 5.0
    beta: float = 20.0
    gamma: float = 0.25
    delta: float = 0.05
    epsilon: float = 1e-3
    zeta: float = 0.1
    # None means 1e4 * M, resolved per formula
    xl_max: Optional[float] = None

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if not 0 < self.delta < self.gamma < 1:
            raise ValueError("need 0 < delta < gamma < 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.zeta < 0:
            raise ValueError("zeta must be nonnegative")
        if self.xl_max is not None and self.xl_max <= 1:
            raise ValueError("xl_max must exceed 1")

    def resolved(self, num_clauses: int) -> CircuitParams:
        if self.xl_max is not None:
            return self
        return replace(self, xl_max=1e4 * num_clauses)

    def to_text(self) -> str:
        """Flat ``key=value`` block; floats use shortest round-trip repr."""
        return "\n".join(f"{k}={v!r}" for k, v in asdict(self).items()) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CircuitParams:
        known = {f.name for f in fields(cls)}
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"unknown circuit parameter {key!r}")
            value = value.strip()
            values[key] = None if value == "None" else float(value)
        return cls(**values)


@dataclass(frozen=True)
class SolverState:
    v: np.ndarray
    xs: np.ndarray
    xl: np.ndarray
    t: float = 0.0

    def copy(self) -> SolverState:
        return SolverState(self.v.copy(), self.xs.copy(), self.xl.copy(), self.t)

    def __eq__(self, other):
        if not isinstance(other, SolverState):
            return NotImplemented
        return (
            self.t == other.t
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.xl, other.xl)
        )

    __hash__ = None


class StateContractError(ValueError):
    pass


class CircuitSystem:
    """Flow field of the circuit built from a formula.

    Works on flat vectors of length ``dimension = n + 2M``; the
    ``SolverState`` helpers pack and unpack them.
    """

    def __init__(self, formula: CnfFormula, params: Optional[CircuitParams] = None):
        self.formula = formula
        self.n = formula.num_variables
        self.m = formula.num_clauses
        self.params = (params or CircuitParams()).resolved(self.m)
        self.dimension = self.n + 2 * self.m

        width = max(len(c) for c in formula.clauses)
        self.width = width
        var = np.zeros((self.m, width), dtype=np.int64)
        sign = np.zeros((self.m, width))
        for row, clause in enumerate(formula.clauses):
            for col, lit in enumerate(clause.literals):
                var[row, col] = lit.variable_index - 1
                sign[row, col] = lit.sign
        self.var = var
        self.sign = sign
        self.pad = sign == 0
        self._flat_var = var.ravel()
        self._rows = np.arange(self.m)

        self.lower = np.concatenate([-np.ones(self.n), np.zeros(self.m), np.ones(self.m)])
        self.upper = np.concatenate(
            [np.ones(self.n), np.ones(self.m), np.full(self.m, float(self.params.xl_max))]
        )

    # -- packing ----------------------------------------------------------

    def pack(self, state: SolverState) -> np.ndarray:
        if len(state.v) != self.n or len(state.xs) != self.m or len(state.xl) != self.m:
            raise StateContractError("state lengths do not match (n, M, M)")
        return np.concatenate([state.v, state.xs, state.xl]).astype(float)

    def unpack(self, x: np.ndarray, t: float = 0.0) -> SolverState:
        n, m = self.n, self.m
        return SolverState(x[:n].copy(), x[n : n + m].copy(), x[n + m :].copy(), float(t))

    def in_box(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    # -- clause algebra ---------------------------------------------------

    def literal_slack(self, v: np.ndarray) -> np.ndarray:
        """``1 - q*v`` per literal slot; padding slots are +inf."""
        a = 1.0 - self.sign * v[self.var]
        a[self.pad] = np.inf
        return a

    def clause_values(self, v: np.ndarray) -> np.ndarray:
        return 0.5 * self.literal_slack(v).min(axis=1)

    def clause_value(self, clause_index: int, v: np.ndarray) -> float:
        if not 0 <= clause_index < self.m:
            raise IndexError(f"clause index {clause_index} out of range [0, {self.m})")
        return float(self.clause_values(np.asarray(v, dtype=float))[clause_index])

    # -- flow -------------------------------------------------------------

    def flow(self, x: np.ndarray) -> np.ndarray:
        n, m, p = self.n, self.m, self.params
        v = x[:n]
        xs = x[n : n + m]
        xl = x[n + m :]

        a = self.literal_slack(v)
        arg = a.argmin(axis=1)
        smallest = a[self._rows, arg]
        masked = a.copy()
        masked[self._rows, arg] = np.inf
        second = masked.min(axis=1)
        is_min = np.zeros_like(self.pad)
        is_min[self._rows, arg] = True

        others = np.where(is_min, second[:, None], smallest[:, None])
        # empty "other literals" set (unit clause) counts as 1
        others[np.isinf(others)] = 1.0
        grad = 0.5 * self.sign * others
        rigid = np.where(is_min, 0.5 * (self.sign - v[self.var]), 0.0)

        c = 0.5 * smallest
        w_grad = (xl * xs)[:, None]
        w_rigid = ((1.0 + p.zeta * xl) * (1.0 - xs))[:, None]
        contrib = w_grad * grad + w_rigid * rigid
        contrib[self.pad] = 0.0

        out = np.empty(self.dimension)
        out[:n] = np.bincount(self._flat_var, weights=contrib.ravel(), minlength=n)
        out[n : n + m] = p.beta * (xs + p.epsilon) * (c - p.gamma)
        out[n + m :] = p.alpha * (c - p.delta)
        return out

    def flow_field(self, state: SolverState) -> np.ndarray:
        x = self.pack(state)
        if not self.in_box(x):
            raise StateContractError("state lies outside its box")
        return self.flow(x)

    def projected_flow(self, x: np.ndarray) -> np.ndarray:
        return project_to_tangent_cone(self.flow(x), x, self.lower, self.upper)

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    # -- readout ----------------------------------------------------------

    def unsatisfied_mask(self, v: np.ndarray) -> np.ndarray:
        truth = v[self.var] > 0
        lit_true = np.where(self.sign > 0, truth, ~truth) & ~self.pad
        return ~lit_true.any(axis=1)

    def defects(self, x: np.ndarray) -> int:
        return int(self.unsatisfied_mask(x[: self.n]).sum())

    def state_defects(self, state: SolverState) -> int:
        return int(self.unsatisfied_mask(np.asarray(state.v)).sum())

    def solution_state(self, assignment: Assignment, xl: float = 1.0) -> SolverState:
        """Rail voltages for ``assignment`` with short memory at 0."""
        v = np.where(np.asarray(assignment, dtype=bool), 1.0, -1.0)
        return SolverState(v, np.zeros(self.m), np.full(self.m, float(xl)), 0.0)


def project_to_tangent_cone(f: np.ndarray, x: np.ndarray, lower, upper) -> np.ndarray:
    """Zero the components of ``f`` that push ``x`` out through an active face."""
    out = f.copy()
    out[(x <= lower) & (f < 0)] = 0.0
    out[(x >= upper) & (f > 0)] = 0.0
    return out


def clamp_state(state: SolverState, params: CircuitParams) -> SolverState:
    if params.xl_max is None:
        params = params.resolved(len(state.xl))
    return SolverState(
        np.clip(state.v, -1.0, 1.0),
        np.clip(state.xs, 0.0, 1.0),
        np.clip(state.xl, 1.0, params.xl_max),
        state.t,
    )


def digital_readout(state: SolverState) -> Assignment:
    """Variable i reads true iff v_i > 0; v_i == 0 reads false."""
    return tuple(bool(x > 0) for x in np.asarray(state.v))


def state_defects(system: CircuitSystem, state: SolverState) -> int:
    return system.state_defects(state)


def jacobian_fd(system, x, h: float = 1e-6) -> np.ndarray:
    """Finite-difference Jacobian of ``system.flow`` at ``x`` (flat vector or state).

    Central differences, switching to one-sided differences for a
    coordinate within ``h`` of a box face. Kinks of the clause minimum give
    one-sided (subgradient) values rather than errors.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x if isinstance(x, np.ndarray) else system.pack(x), dtype=float)
    d = len(x)
    lower = getattr(system, "lower", np.full(d, -np.inf))
    upper = getattr(system, "upper", np.full(d, np.inf))
    f0 = None
    jac = np.empty((d, d))
    for k in range(d):
        up_ok = x[k] + h <= upper[k]
        down_ok = x[k] - h >= lower[k]
        if up_ok and down_ok:
            xp = x.copy()
            xm = x.copy()
            xp[k] += h
            xm[k] -= h
            jac[:, k] = (system.flow(xp) - system.flow(xm)) / (2 * h)
            continue
        if f0 is None:
            f0 = system.flow(x)
        xk = x.copy()
        if up_ok:
            xk[k] += h
            jac[:, k] = (system.flow(xk) - f0) / h
        elif down_ok:
            xk[k] -= h
            jac[:, k] = (f0 - system.flow(xk)) / h
        else:
            # box thinner than 2h in this coordinate
            jac[:, k] = 0.0
    return jac
