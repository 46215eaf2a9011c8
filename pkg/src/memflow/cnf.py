"""CNF formulas, DIMACS I/O, planted instances and an exhaustive oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from memflow.rng import Pcg32

BRUTE_FORCE_MAX_VARIABLES = 24

Assignment = tuple[bool, ...]


@dataclass(frozen=True)
class Literal:
    variable_index: int
    sign: int

    def __post_init__(self):
        if self.variable_index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.variable_index}")
        if self.sign not in (1, -1):
            raise ValueError(f"literal sign must be +1 or -1, got {self.sign}")

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        return cls(abs(lit), 1 if lit > 0 else -1)

    def to_int(self) -> int:
        return self.sign * self.variable_index

    def is_true(self, assignment: Assignment) -> bool:
        return assignment[self.variable_index - 1] == (self.sign > 0)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("clause must contain at least one literal")
        seen = {lit.variable_index for lit in self.literals}
        if len(seen) != len(self.literals):
            raise ValueError("clause repeats a variable")

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> Clause:
        return cls(tuple(Literal.from_int(x) for x in lits))

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def __len__(self):
        return len(self.literals)


@dataclass(frozen=True)
class CnfFormula:
    num_variables: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_variables < 1:
            raise ValueError("formula needs at least one variable")
        if not self.clauses:
            raise ValueError("formula needs at least one clause")
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable_index > self.num_variables:
                    raise ValueError(
                        f"literal {lit.to_int()} exceeds n={self.num_variables}"
                    )

    @classmethod
    def from_ints(cls, num_variables: int, clauses: Iterable[Iterable[int]]) -> CnfFormula:
        return cls(num_variables, tuple(Clause.from_ints(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]


# -- DIMACS ---------------------------------------------------------------


class DimacsError(ValueError):
    """Malformed DIMACS input. ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class HeaderError(DimacsError):
    pass


class LiteralRangeError(DimacsError):
    pass


class ClauseCountError(DimacsError):
    pass


class EmptyClauseError(DimacsError):
    pass


class DuplicateVariableError(DimacsError):
    pass


def parse_dimacs(text: str) -> CnfFormula:
    n = m = None
    clauses: list[list[int]] = []
    current: list[int] = []
    current_start = 0
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB end marker
            break
        last_line = lineno
        if line.startswith("p"):
            if n is not None:
                raise HeaderError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise HeaderError("malformed header, expected 'p cnf <n> <M>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise HeaderError("malformed header, counts must be integers", lineno) from None
            if n < 1 or m < 1:
                raise HeaderError("header counts must be positive", lineno)
            continue
        if n is None:
            raise HeaderError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"invalid token {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise EmptyClauseError("empty clause", lineno)
                clauses.append(_checked_clause(current, current_start))
                current = []
                continue
            if abs(lit) > n:
                raise LiteralRangeError(f"literal index exceeds n ({lit} > {n})", lineno)
            if not current:
                current_start = lineno
            current.append(lit)

    if n is None:
        raise HeaderError("missing 'p cnf' header", max(last_line, 1))
    if current:
        # tolerate a missing final terminator
        clauses.append(_checked_clause(current, current_start))
    if len(clauses) != m:
        raise ClauseCountError(
            f"clause count mismatch: header declares {m}, found {len(clauses)}",
            max(last_line, 1),
        )
    return CnfFormula.from_ints(n, clauses)


def _checked_clause(lits: list[int], lineno: int) -> list[int]:
    if len({abs(x) for x in lits}) != len(lits):
        raise DuplicateVariableError("clause repeats a variable", lineno)
    return lits


def emit_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_variables} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(x) for x in clause.to_ints()) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> CnfFormula:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def write_dimacs(formula: CnfFormula, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_dimacs(formula))


# -- evaluation -----------------------------------------------------------


def count_defects(formula: CnfFormula, assignment: Assignment) -> int:
    """Number of clauses with no true literal under ``assignment``."""
    if len(assignment) != formula.num_variables:
        raise ValueError(
            f"assignment has length {len(assignment)}, formula has {formula.num_variables} variables"
        )
    return sum(
        1
        for clause in formula.clauses
        if not any(lit.is_true(assignment) for lit in clause.literals)
    )


class BruteForceRefused(ValueError):
    pass


def brute_force_solve(formula: CnfFormula) -> Optional[Assignment]:
    """Exhaustive search; returns the first satisfying assignment or None.

    Assignments are scanned in lexicographic order with false < true and
    x1 as the most significant position.
    """
    n = formula.num_variables
    if n > BRUTE_FORCE_MAX_VARIABLES:
        raise BruteForceRefused(
            f"brute force limited to n <= {BRUTE_FORCE_MAX_VARIABLES}, got n={n}"
        )
    shifts = np.array([n - i for i in range(1, n + 1)], dtype=np.int64)
    chunk = 1 << min(n, 18)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)
        ok = np.ones(len(idx), dtype=bool)
        for clause in formula.clauses:
            sat = np.zeros(len(idx), dtype=bool)
            for lit in clause.literals:
                col = bits[:, lit.variable_index - 1]
                sat |= col if lit.sign > 0 else ~col
            ok &= sat
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if hits.size:
            return tuple(bool(b) for b in bits[hits[0]])
    return None


def all_assignments(n: int):
    """All 2^n assignments in the same order as :func:`brute_force_solve`."""
    return itertools.product((False, True), repeat=n)


# -- planted instances ----------------------------------------------------


def generate_planted_ksat(
    n: int, ratio: float, k: int = 3, seed: int = 0
) -> tuple[CnfFormula, Assignment]:
    """Random k-SAT formula with a hidden satisfying assignment.

    Draw order from the PCG stream: n plant bits, then per clause k distinct
    variables (rejection on repeats) followed by k sign bits, resampled as a
    block until the plant satisfies the clause.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    num_clauses = round(ratio * n)
    if num_clauses < 1:
        raise ValueError(f"ratio*n must be >= 1, got {ratio * n}")

    rng = Pcg32.from_seed(seed)
    plant = tuple(bool(rng.bit()) for _ in range(n))
    clauses = []
    for _ in range(num_clauses):
        chosen: list[int] = []
        while len(chosen) < k:
            var = rng.bounded(n) + 1
            if var not in chosen:
                chosen.append(var)
        while True:
            signs = [1 if rng.bit() else -1 for _ in range(k)]
            if any(plant[v - 1] == (s > 0) for v, s in zip(chosen, signs)):
                break
        clauses.append([s * v for v, s in zip(chosen, signs)])
    return CnfFormula.from_ints(n, clauses), plant


def generate_random_ksat(n: int, num_clauses: int, k: int, seed: int) -> CnfFormula:
    """Uniform random k-SAT (no plant); may be unsatisfiable."""
    rng = Pcg32.from_seed(seed)
    clauses = []
    for _ in range(num_clauses):
        chosen: list[int] = []
        while len(chosen) < k:
            var = rng.bounded(n) + 1
            if var not in chosen:
                chosen.append(var)
        clauses.append([v if rng.bit() else -v for v in chosen])
    return CnfFormula.from_ints(n, clauses)
