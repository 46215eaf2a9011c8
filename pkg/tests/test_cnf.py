import itertools

import numpy as np
import pytest

from memflow.cnf import (
    BruteForceRefused,
    ClauseCountError,
    CnfFormula,
    DuplicateVariableError,
    EmptyClauseError,
    HeaderError,
    LiteralRangeError,
    brute_force_solve,
    count_defects,
    emit_dimacs,
    generate_planted_ksat,
    generate_random_ksat,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
)


def test_parse_single_clause():
    f = parse_dimacs("p cnf 2 1\n1 -2 0")
    assert f.num_variables == 2
    assert f.to_ints() == [[1, -2]]


def test_parse_skips_comments():
    f = parse_dimacs("c comment\np cnf 1 1\n1 0")
    assert (f.num_variables, f.to_ints()) == (1, [[1]])


def test_parse_clause_spanning_lines_and_end_marker():
    f = parse_dimacs("p cnf 3 2\n1 2\n-3 0 2\n0\n%\n0\n")
    assert f.to_ints() == [[1, 2, -3], [2]]


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("p cnf 1 1\n2 0", LiteralRangeError, 2),
        ("p cnf x 1\n1 0", HeaderError, 1),
        ("1 0\n", HeaderError, 1),
        ("p cnf 2 2\n1 0\n", ClauseCountError, 2),
        ("p cnf 2 2\n1 0\n0\n", EmptyClauseError, 3),
        ("c\np cnf 2 1\n1 -1 0\n", DuplicateVariableError, 3),
    ],
)
def test_parse_errors_name_the_line(text, error, line):
    with pytest.raises(error) as info:
        parse_dimacs(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_literal_range_message():
    with pytest.raises(LiteralRangeError, match="literal index exceeds n"):
        parse_dimacs("p cnf 1 1\n2 0")


def test_emit_examples():
    assert emit_dimacs(CnfFormula.from_ints(2, [[1, -2]])) == "p cnf 2 1\n1 -2 0\n"
    assert emit_dimacs(CnfFormula.from_ints(1, [[1]])) == "p cnf 1 1\n1 0\n"


def test_round_trip_1000_formulas():
    rng = np.random.default_rng(2024)
    for i in range(1000):
        n = int(rng.integers(1, 51))
        m = int(rng.integers(1, 40))
        clauses = []
        for _ in range(m):
            width = int(rng.integers(1, min(n, 5) + 1))
            vars_ = rng.choice(np.arange(1, n + 1), size=width, replace=False)
            clauses.append([int(v) * int(rng.choice([-1, 1])) for v in vars_])
        f = CnfFormula.from_ints(n, clauses)
        assert parse_dimacs(emit_dimacs(f)) == f


def test_file_round_trip(tmp_path):
    f, _ = generate_planted_ksat(15, 4.0, 3, 5)
    path = tmp_path / "f.cnf"
    write_dimacs(f, path)
    assert read_dimacs(path) == f
    assert path.read_bytes().endswith(b" 0\n")


def test_count_defects_examples():
    contradiction = CnfFormula.from_ints(1, [[1], [-1]])
    assert count_defects(contradiction, (True,)) == 1
    assert count_defects(CnfFormula.from_ints(2, [[1, 2]]), (True, False)) == 0
    with pytest.raises(ValueError):
        count_defects(CnfFormula.from_ints(1, [[1]]), ())


def test_brute_force_examples():
    assert brute_force_solve(CnfFormula.from_ints(1, [[1], [-1]])) is None
    assert brute_force_solve(CnfFormula.from_ints(2, [[1, 2]])) == (False, True)
    assert brute_force_solve(CnfFormula.from_ints(1, [[1]])) == (True,)


def test_brute_force_refuses_large_n():
    with pytest.raises(BruteForceRefused):
        brute_force_solve(CnfFormula.from_ints(25, [[25]]))


def _naive_first_solution(f):
    for bits in itertools.product((False, True), repeat=f.num_variables):
        if count_defects(f, bits) == 0:
            return bits
    return None


def test_oracle_matches_naive_enumeration():
    seen_unsat = 0
    for seed in range(150):
        n = 1 + seed % 12
        m = int(round((2.0 + (seed % 7)) * n))
        f = generate_random_ksat(n, m, min(3, n), seed)
        expected = _naive_first_solution(f)
        assert brute_force_solve(f) == expected
        seen_unsat += expected is None
    assert seen_unsat > 0


def test_planted_plant_always_satisfies():
    for seed in range(200):
        f, plant = generate_planted_ksat(30, 4.25, 3, seed)
        assert f.num_clauses == round(4.25 * 30)
        assert all(len(c) == 3 for c in f.clauses)
        assert count_defects(f, plant) == 0


def test_planted_is_deterministic():
    a = emit_dimacs(generate_planted_ksat(20, 4.25, 3, 7)[0]).encode()
    b = emit_dimacs(generate_planted_ksat(20, 4.25, 3, 7)[0]).encode()
    c = emit_dimacs(generate_planted_ksat(20, 4.25, 3, 8)[0]).encode()
    assert a == b
    assert a != c


def test_planted_rejects_bad_parameters():
    with pytest.raises(ValueError):
        generate_planted_ksat(2, 1.0, 3, 1)
    with pytest.raises(ValueError):
        generate_planted_ksat(5, 0.01, 3, 1)
