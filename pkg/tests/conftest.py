import pytest

from memflow.cnf import CnfFormula, generate_planted_ksat
from memflow.circuit import CircuitSystem


@pytest.fixture
def planted20():
    formula, plant = generate_planted_ksat(20, 4.25, 3, 11)
    return CircuitSystem(formula), plant


@pytest.fixture
def contradiction():
    return CnfFormula.from_ints(1, [[1], [-1]])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def emit(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
