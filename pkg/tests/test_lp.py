"""Exact simplex: optima, infeasibility, unboundedness, and model validation."""

import random

import pytest

from graphcover import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LpFormatError,
    LpModel,
    Rat,
    simplex_solve,
)
from graphcover.rationals import ZERO


def test_single_binding_constraint():
    m = LpModel("t1")
    m.add_var("x", obj=Rat(1))
    m.add_constraint("lb", {"x": Rat(1)}, ">=", Rat(3))
    res = simplex_solve(m)
    assert res.status == OPTIMAL
    assert res.value == 3
    assert res["x"] == 3


def test_maximize_up_to_capacity():
    m = LpModel("t2", sense="max")
    m.add_var("x", obj=Rat(1))
    m.add_var("y", obj=Rat(1))
    m.add_constraint("cap", {"x": Rat(1), "y": Rat(1)}, "<=", Rat(5, 2))
    res = simplex_solve(m)
    assert res.status == OPTIMAL
    assert res.value == Rat(5, 2)
    assert res["x"] + res["y"] == Rat(5, 2)


def test_contradictory_bounds_infeasible():
    m = LpModel("t3")
    m.add_var("x")
    m.add_constraint("lo", {"x": Rat(1)}, ">=", Rat(1))
    m.add_constraint("hi", {"x": Rat(1)}, "<=", ZERO)
    assert simplex_solve(m).status == INFEASIBLE


def test_unbounded_detected():
    m = LpModel("t4", sense="max")
    m.add_var("x", obj=Rat(1))
    m.add_constraint("lo", {"x": Rat(1)}, ">=", ZERO)
    assert simplex_solve(m).status == UNBOUNDED


def test_fractional_optimum_is_exact():
    # min 3x + 5y  s.t.  x + 2y >= 1,  2x + y >= 1  ->  x = y = 1/3
    m = LpModel("t5")
    m.add_var("x", obj=Rat(3))
    m.add_var("y", obj=Rat(5))
    m.add_constraint("a", {"x": Rat(1), "y": Rat(2)}, ">=", Rat(1))
    m.add_constraint("b", {"x": Rat(2), "y": Rat(1)}, ">=", Rat(1))
    res = simplex_solve(m)
    assert res.status == OPTIMAL
    assert res.value == Rat(8, 3)
    assert res["x"] == Rat(1, 3) and res["y"] == Rat(1, 3)


def test_equality_constraints_and_free_variables():
    # min |style| problem with a free variable pinned by equalities.
    m = LpModel("t6")
    m.add_var("x", nonneg=False, obj=Rat(1))
    m.add_var("y", obj=Rat(2))
    m.add_constraint("eq", {"x": Rat(1), "y": Rat(1)}, "==", Rat(4))
    m.add_constraint("lo", {"y": Rat(1)}, ">=", Rat(1))
    res = simplex_solve(m)
    assert res.status == OPTIMAL
    # x = 4 - y, objective = 4 - y + 2y = 4 + y, minimized at y = 1.
    assert res.value == 5
    assert res["x"] == 3 and res["y"] == 1


def _check_assignment(model, res):
    for c in model.constraints:
        lhs = sum((coef * res.assignment[v] for v, coef in c.coeffs.items()), ZERO)
        if c.relation == "<=":
            assert lhs <= c.rhs, c.name
        elif c.relation == ">=":
            assert lhs >= c.rhs, c.name
        else:
            assert lhs == c.rhs, c.name
    for v in model.variables:
        if model.nonneg[v]:
            assert res.assignment[v] >= 0
    obj = sum(
        (coef * res.assignment[v] for v, coef in model.objective.items()), ZERO
    )
    assert obj == res.value


def test_random_models_satisfy_constraints_exactly():
    """Returned assignments obey every row with zero tolerance."""
    solved = 0
    for seed in range(40):
        rng = random.Random(seed)
        m = LpModel(f"rand{seed}", sense=rng.choice(["min", "max"]))
        nv = rng.randint(1, 4)
        for i in range(nv):
            m.add_var(f"v{i}", obj=Rat(rng.randint(-3, 5)))
        for j in range(rng.randint(1, 5)):
            coeffs = {
                f"v{i}": Rat(rng.randint(-2, 3))
                for i in range(nv)
                if rng.random() < 0.8
            }
            m.add_constraint(
                f"c{j}", coeffs, rng.choice(["<=", ">="]), Rat(rng.randint(-2, 6))
            )
        res = simplex_solve(m)
        if res.status == OPTIMAL:
            _check_assignment(m, res)
            solved += 1
    assert solved >= 10


def test_duplicate_variable_rejected():
    m = LpModel("dup")
    m.add_var("x")
    with pytest.raises(LpFormatError):
        m.add_var("x")


def test_unknown_variable_rejected():
    m = LpModel("unk")
    m.add_var("x")
    with pytest.raises(LpFormatError):
        m.add_constraint("c", {"y": Rat(1)}, ">=", ZERO)


def test_float_coefficients_rejected():
    m = LpModel("flt")
    m.add_var("x")
    with pytest.raises(LpFormatError):
        m.add_constraint("c", {"x": 0.5}, ">=", ZERO)


def test_bad_relation_rejected():
    m = LpModel("rel")
    m.add_var("x")
    with pytest.raises(LpFormatError):
        m.add_constraint("c", {"x": Rat(1)}, ">", ZERO)
