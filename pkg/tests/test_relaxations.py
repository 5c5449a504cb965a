"""Fractional relaxations: gap values, point extraction, and dual completion."""

import pytest

from graphcover import (
    INF,
    InstanceError,
    Rat,
    brute_force_eds,
    brute_force_multicut,
    build_relaxation,
    complete_eds_dual,
    extract_relaxation_point,
    gen_instance,
    relaxation_value,
    simplex_solve,
)
from graphcover.rationals import ZERO

from _support import two_leaf_star


# -- gap constructions ------------------------------------------------------


def test_star_gap_natural_value():
    inst = gen_instance("star-gap-eds", n=4)
    assert relaxation_value(inst, "natural") == Rat(1, 4)


def test_star_gap_strengthened_closes_the_gap():
    inst = gen_instance("star-gap-eds", n=4)
    assert relaxation_value(inst, "strengthened") == 1


def test_subdivided_star_natural_value():
    inst = gen_instance("subdivided-star-multicut", n=4)
    assert relaxation_value(inst, "natural") == 1  # n/4 for n = 4


def test_relaxations_lower_bound_the_optimum():
    for seed in range(8):
        inst = gen_instance("random-tree-eds", n=7, seed=seed)
        opt = brute_force_eds(inst).total
        nat = relaxation_value(inst, "natural")
        stg = relaxation_value(inst, "strengthened")
        assert nat <= stg <= opt
    for seed in range(4):
        inst = gen_instance("random-tree-multicut", n=7, k=3, seed=seed)
        opt = brute_force_multicut(inst).total
        nat = relaxation_value(inst, "natural")
        stg = relaxation_value(inst, "strengthened")
        assert nat <= stg <= opt


def test_mismatched_kind_rejected():
    inst = gen_instance("random-set-cover", seed=0)
    with pytest.raises(InstanceError):
        build_relaxation(inst, "natural")
    with pytest.raises(InstanceError):
        build_relaxation(gen_instance("star-gap-eds", n=3), "edge-cover")
    with pytest.raises(InstanceError):
        build_relaxation(gen_instance("star-gap-eds", n=3), "no-such-kind")


# -- point extraction -------------------------------------------------------


def test_extract_point_shapes():
    inst = gen_instance("random-tree-eds", n=6, seed=1)
    model = build_relaxation(inst, "strengthened")
    res = simplex_solve(model)
    xe, xv, z = extract_relaxation_point(inst, res)
    assert sorted(xe) == sorted(inst.graph.edge_ids())
    assert sorted(xv) == list(range(inst.graph.n))
    assert sorted(z) == sorted(inst.graph.edge_ids())
    for e, p in inst.penalty.items():
        if p == INF:
            assert z[e] == 0  # infinite penalties cannot be paid fractionally
        assert 0 <= xe[e]
        assert 0 <= z[e]


def test_fractional_point_is_feasible():
    inst = gen_instance("star-gap-eds", n=4)
    model = build_relaxation(inst, "natural")
    res = simplex_solve(model)
    xe, xv, z = extract_relaxation_point(inst, res)
    # covering: every closed edge neighborhood carries at least 1 - z of mass
    for e in inst.graph.edge_ids():
        assert xe[e] == Rat(1, 4)
        assert xv[0] >= xe[e]
    assert xv[0] == Rat(1, 4)


# -- dual completion --------------------------------------------------------


def test_zero_xi_always_completes():
    inst = two_leaf_star(Rat(2), Rat(1))
    got = complete_eds_dual(inst, {1: ZERO, 2: ZERO})
    assert got == ({}, {})


def test_optimal_xi_completes():
    inst = two_leaf_star(Rat(2), Rat(2))
    got = complete_eds_dual(inst, {1: Rat(2), 2: Rat(2)})
    assert got is not None
    nu, mu = got
    # capacity rows: per-edge nu mass within edge weights, per-node mu within node weights
    for e in (1, 2):
        assert sum(nu.get((e, f), ZERO) for f in (1, 2)) <= inst.edge_weight[e]
    for v in (0, 1, 2):
        assert sum(mu.get((v, e), ZERO) for e in (1, 2)) <= inst.node_weight[v]


def test_overcharged_xi_fails():
    tree_inst = two_leaf_star(Rat(2), Rat(2), wr=ZERO, w1=ZERO, w2=ZERO)
    assert complete_eds_dual(tree_inst, {1: Rat(1), 2: ZERO}) is None


def test_completion_supports_infinite_penalties():
    inst = two_leaf_star(INF, ZERO)
    # edge 1 alone dominates both edges: alpha_1 = w(e1)+w(r)+w(v1) = 4
    got = complete_eds_dual(inst, {1: Rat(4), 2: ZERO})
    assert got is not None
