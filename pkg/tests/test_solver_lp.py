
import numpy as np
import pytest

from railyard.solver import (
    FEASIBILITY_TOL,
    LinearModel,
    LpStatus,
    ModelError,
    solve_lp,
)

from oracles import enumerate_lp, random_lp


def build_model(c, A, b, lb, ub, sense):
    m = LinearModel()
    for j in range(len(c)):
        m.add_variable(f"x{j}", lb=lb[j], ub=ub[j])
    for a, rhs in zip(A, b):
        m.add_constraint({j: a[j] for j in range(len(a)) if a[j] != 0.0}, "<=", rhs)
    m.set_objective({j: c[j] for j in range(len(c))}, sense=sense)
    return m


class TestModelBuilding:
    def test_first_variable_handle_is_zero(self):
        m = LinearModel()
        assert m.add_variable("x", lb=0.0) == 0

    def test_binary_flag(self):
        m = LinearModel()
        h = m.add_variable("u", lb=0.0, ub=1.0, binary=True)
        assert m.variables[h].binary
        assert m.binary_indices() == [h]

    def test_invalid_bounds_rejected(self):
        m = LinearModel()
        with pytest.raises(ModelError):
            m.add_variable("x", lb=2.0, ub=1.0)

    def test_binary_bounds_must_be_within_unit_interval(self):
        m = LinearModel()
        with pytest.raises(ModelError):
            m.add_variable("u", lb=0.0, ub=2.0, binary=True)

    def test_constraint_handle_and_unknown_index(self):
        m = LinearModel()
        m.add_variable("x")
        m.add_variable("y")
        assert m.add_constraint({0: 1.0, 1: 1.0}, "<=", 4.0) == 0
        with pytest.raises(ModelError):
            m.add_constraint({99: 1.0}, "<=", 0.0)

    def test_empty_row_accepted(self):
        m = LinearModel()
        m.add_variable("x")
        m.add_constraint({}, "<=", -1.0)
        m.set_objective({})
        assert solve_lp(m).status is LpStatus.INFEASIBLE

    def test_dump_has_version_header(self):
        m = LinearModel()
        m.add_variable("x", ub=3.0)
        m.add_variable("u", ub=1.0, binary=True)
        m.add_constraint({0: 1.0, 1: -2.0}, ">=", 1.0)
        m.set_objective({0: 1.0})
        text = m.dump()
        assert text.splitlines()[0] == "railyard-lp v1"
        assert "binaries" in text


class TestSolveLpBasics:
    def test_min_x_with_floor(self):
        m = LinearModel()
        m.add_variable("x", lb=0.0)
        m.add_constraint({0: 1.0}, ">=", 3.0)
        m.set_objective({0: 1.0}, "min")
        sol = solve_lp(m)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective == pytest.approx(3.0, abs=1e-9)
        assert sol.x[0] == pytest.approx(3.0, abs=1e-9)

    def test_max_over_triangle(self):
        # expected value 12 at (4, 0) confirmed by enumerating the vertices
        # (0,0), (4,0), (0,4) of {x+y<=4, x,y>=0}
        m = LinearModel()
        m.add_variable("x")
        m.add_variable("y")
        m.add_constraint({0: 1.0, 1: 1.0}, "<=", 4.0)
        m.set_objective({0: 3.0, 1: 2.0}, "max")
        sol = solve_lp(m)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective == pytest.approx(12.0, abs=1e-9)
        assert sol.x[0] == pytest.approx(4.0, abs=1e-9)
        assert sol.x[1] == pytest.approx(0.0, abs=1e-9)

    def test_infeasible_classified(self):
        m = LinearModel()
        m.add_variable("x", lb=0.0)
        m.add_constraint({0: 1.0}, "<=", -1.0)
        m.set_objective({})
        assert solve_lp(m).status is LpStatus.INFEASIBLE

    def test_unbounded_classified(self):
        m = LinearModel()
        m.add_variable("x", lb=0.0)
        m.set_objective({0: -1.0}, "min")
        assert solve_lp(m).status is LpStatus.UNBOUNDED

    def test_equality_constraints(self):
        m = LinearModel()
        m.add_variable("x")
        m.add_variable("y")
        m.add_constraint({0: 1.0, 1: 1.0}, "=", 2.0)
        m.add_constraint({0: 1.0, 1: -1.0}, "=", 0.0)
        m.set_objective({0: 1.0, 1: 3.0}, "min")
        sol = solve_lp(m)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x == pytest.approx([1.0, 1.0], abs=1e-9)

    def test_upper_bounds_respected(self):
        m = LinearModel()
        m.add_variable("x", lb=1.0, ub=2.5)
        m.set_objective({0: -1.0}, "min")
        sol = solve_lp(m)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x[0] == pytest.approx(2.5, abs=1e-12)

    def test_shifted_lower_bounds(self):
        m = LinearModel()
        m.add_variable("x", lb=-5.0, ub=5.0)
        m.add_constraint({0: 2.0}, "<=", -4.0)
        m.set_objective({0: 1.0}, "min")
        sol = solve_lp(m)
        assert sol.objective == pytest.approx(-5.0, abs=1e-9)


class TestLpOracle:
    def test_random_lps_match_vertex_enumeration(self):
        rng = np.random.default_rng(20260810)
        n_solved = 0
        for _ in range(60):
            c, A, b, lb, ub, sense = random_lp(rng)
            status, obj, _ = enumerate_lp(c, A, b, [], [], lb, ub, sense)
            m = build_model(c, A, b, lb, ub, sense)
            sol = solve_lp(m)
            if status == "infeasible":
                assert sol.status is LpStatus.INFEASIBLE
            else:
                assert sol.status is LpStatus.OPTIMAL
                assert sol.objective == pytest.approx(obj, abs=1e-7)
                n_solved += 1
        assert n_solved > 20

    def test_optimal_points_are_feasible(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            c, A, b, lb, ub, sense = random_lp(rng)
            m = build_model(c, A, b, lb, ub, sense)
            sol = solve_lp(m)
            if sol.status is not LpStatus.OPTIMAL:
                continue
            x = sol.x
            assert np.all(A @ x <= b + FEASIBILITY_TOL)
            assert np.all(x >= lb - 1e-9)
            assert np.all(x <= ub + 1e-9)


class TestDeterminism:
    def test_identical_model_identical_result(self):
        rng = np.random.default_rng(3)
        c, A, b, lb, ub, sense = random_lp(rng)
        m1 = build_model(c, A, b, lb, ub, sense)
        m2 = build_model(c, A, b, lb, ub, sense)
        s1 = solve_lp(m1)
        s2 = solve_lp(m2)
        assert s1.iterations == s2.iterations
        assert s1.objective == s2.objective
        assert np.array_equal(s1.x, s2.x)
