"""Internal CDCL solver, external driver, and model checking."""
import random
import sys

import pytest

from gridloop import (
    CnfBuilder,
    Model,
    check_model,
    default_solver_command,
    solve_builder,
    solve_external,
    solve_internal,
)
from gridloop.solver import DEFAULT_SOLVER_ENV, _luby, external_solve_fn
from gridloop import dimacs_solver

from oracles import eval_clauses, satisfiable


def test_unit_conflict_unsat():
    assert solve_internal([[1], [-1]], 1).is_unsat


def test_binary_clause_sat():
    out = solve_internal([[1, 2]], 2)
    assert out.is_sat
    assert out.model[1] or out.model[2]


def test_empty_formula_sat():
    out = solve_internal([], 3)
    assert out.is_sat
    assert set(out.model.assignment) == {1, 2, 3}  # total model


def test_empty_clause_unsat():
    assert solve_internal([[1], []], 1).is_unsat


def random_3cnf(rng, nvars, nclauses):
    clauses = []
    for _ in range(nclauses):
        vs = rng.sample(range(1, nvars + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return clauses


def test_random_3cnf_vs_enumeration():
    rng = random.Random(42)
    for _ in range(100):
        nvars = rng.randint(4, 12)
        clauses = random_3cnf(rng, nvars, rng.randint(nvars, 5 * nvars))
        out = solve_internal(clauses, nvars)
        assert out.is_sat == satisfiable(clauses, nvars), clauses
        if out.is_sat:
            assert eval_clauses(clauses, out.model.assignment)


def test_determinism():
    rng = random.Random(3)
    clauses = random_3cnf(rng, 15, 60)
    first = solve_internal(clauses, 15)
    for _ in range(3):
        again = solve_internal(clauses, 15)
        assert again.status == first.status
        if first.is_sat:
            assert again.model.assignment == first.model.assignment


def test_conflict_budget_unknown():
    # hard pigeonhole-style formula with a tiny budget reports unknown
    rng = random.Random(11)
    clauses = random_3cnf(rng, 20, 200)
    out = solve_internal(clauses, 20, max_conflicts=1)
    assert out.status in ("unknown", "sat", "unsat")
    # an unsatisfiable crafted instance must exceed 1 conflict
    hard = [[1, 2], [1, -2], [-1, 2], [-1, -2], [3, 4], [3, -4], [-3, 4], [-3, -4]]
    assert solve_internal(hard, 4).is_unsat


def test_solve_builder_respects_unsat_flag():
    b = CnfBuilder()
    b.add_clause([])
    assert solve_builder(b).is_unsat


def test_check_model():
    assert check_model([], Model({}))
    assert not check_model([[1]], Model({1: False}))
    assert check_model([[1, -2]], Model({1: False, 2: False}))
    with pytest.raises(ValueError):
        check_model([[5]], Model({1: True}))


def test_check_model_random_agreement():
    rng = random.Random(5)
    for _ in range(50):
        nvars = rng.randint(3, 10)
        clauses = random_3cnf(rng, nvars, 2 * nvars)
        a = {v: rng.random() < 0.5 for v in range(1, nvars + 1)}
        assert check_model(clauses, Model(a)) == eval_clauses(clauses, a)


def test_luby_sequence():
    assert [_luby(i) for i in range(15)] == [
        1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8,
    ]


# -- external driver ------------------------------------------------------

BUNDLED = [sys.executable, "-m", "gridloop.dimacs_solver"]


def test_external_sat_verified():
    out = solve_external(BUNDLED, [[1, 2], [-1, -2]], 2)
    assert out.is_sat
    assert out.model[1] != out.model[2]


def test_external_unsat():
    assert solve_external(BUNDLED, [[1], [-1]], 1).is_unsat


def test_external_bad_command_unknown():
    out = solve_external(["/nonexistent/solver-binary"], [[1]], 1)
    assert out.status == "unknown"
    assert "cannot run solver" in out.reason


def test_external_solve_fn():
    fn = external_solve_fn(BUNDLED)
    assert fn([[1]], 1).is_sat
    assert fn([[1], [-1]], 1).is_unsat


def test_default_solver_command_env(monkeypatch):
    monkeypatch.setenv(DEFAULT_SOLVER_ENV, "mysolver --opt")
    assert default_solver_command() == ["mysolver", "--opt"]
    monkeypatch.delenv(DEFAULT_SOLVER_ENV)
    assert default_solver_command()[-2:] == ["-m", "gridloop.dimacs_solver"]


def test_dimacs_solver_main(tmp_path, capsys):
    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 2 1\n1 -2 0\n")
    assert dimacs_solver.main([str(sat)]) == 10
    out = capsys.readouterr().out
    assert "s SATISFIABLE" in out
    assert any(line.startswith("v ") for line in out.splitlines())

    unsat = tmp_path / "unsat.cnf"
    unsat.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert dimacs_solver.main([str(unsat)]) == 20
    assert "s UNSATISFIABLE" in capsys.readouterr().out
