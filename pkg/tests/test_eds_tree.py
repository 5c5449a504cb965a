"""Exact tree solver: frozen small cases, case dispatch, and dual reporting."""

from graphcover import (
    INF,
    EdsInstance,
    Rat,
    RootedTree,
    base_case,
    brute_force_eds,
    case_a_reduce_and_lift,
    case_b_reduce_and_lift,
    ext_sum,
    gen_instance,
    solve_eds_tree,
    verify_eds_optimality,
)
from graphcover.rationals import ZERO

from _support import two_leaf_star


def _path(weights_nodes, weights_edges, penalties):
    n = len(weights_nodes)
    tree = RootedTree([0] + list(range(n - 1)), 0)
    return EdsInstance(
        tree,
        {v: Rat(w) for v, w in enumerate(weights_nodes)},
        {v: Rat(weights_edges[v - 1]) for v in range(1, n)},
        {v: penalties[v - 1] for v in range(1, n)},
    )


# -- full solver on frozen stars --------------------------------------------


def test_star_penalties_cheaper():
    sol, dual = solve_eds_tree(two_leaf_star(Rat(2), Rat(1)))
    assert sol.edges == ()
    assert sol.total == 3
    assert dual.xi == {1: Rat(2), 2: Rat(1)}
    assert dual.total == 3


def test_star_one_edge_dominates():
    sol, dual = solve_eds_tree(two_leaf_star(Rat(2), Rat(3)))
    assert sol.edges == (1,)
    assert sol.total == 4
    assert dual.total == 4


def test_zero_penalties_mean_empty_solution():
    for seed in range(5):
        inst = gen_instance("random-tree-eds", n=8, seed=seed, pmax=0, inf_prob=0.0)
        sol, dual = solve_eds_tree(inst)
        assert sol.edges == ()
        assert sol.total == 0
        assert all(x == 0 for x in dual.xi.values())


# -- base case --------------------------------------------------------------


def test_base_zero_weight_edge_always_taken():
    tree = RootedTree([0, 0], 0)
    inst = EdsInstance(tree, {0: ZERO, 1: ZERO}, {1: ZERO}, {1: Rat(5)})
    F, xi = base_case(inst)
    assert F == frozenset({1})
    assert ext_sum(xi.values()) == 0


def test_base_penalties_win():
    F, xi = base_case(two_leaf_star(Rat(2), Rat(1)))
    assert F == frozenset()
    assert xi == {1: Rat(2), 2: Rat(1)}


def test_base_infinite_penalty_forces_coverage():
    F, xi = base_case(two_leaf_star(INF, ZERO))
    assert F == frozenset({1})  # cheapest star edge
    assert ext_sum(xi.values()) == 4  # alpha_1 = w(e1) + w(r)


# -- deeper reductions ------------------------------------------------------


def test_free_path_costs_nothing():
    inst = _path([0, 0, 0], [0, 0], [ZERO, Rat(5)])
    sol, dual = solve_eds_tree(inst)
    assert sol.total == 0
    assert dual.total == 0
    assert brute_force_eds(inst).total == 0


def test_reduce_entry_points_agree_with_full_solver():
    # depth-2 instance with positive penalty on the deep leaf edge
    inst = _path([1, 2, 1], [3, 1], [Rat(2), Rat(4)])
    via_a = case_a_reduce_and_lift(inst)
    full = solve_eds_tree(inst)
    assert via_a[0].total == full[0].total == brute_force_eds(inst).total

    # zero penalty on every deepest leaf edge routes through the other case
    inst_b = _path([1, 1, 1, 1], [1, 1, 1], [Rat(3), Rat(2), ZERO])
    via_b = case_b_reduce_and_lift(inst_b)
    assert via_b[0].total == brute_force_eds(inst_b).total


def test_caterpillar_heavy_center():
    # center u with weight 10 and two cheap penalty leaves below it
    tree = RootedTree([0, 0, 1, 1], 0)
    inst = EdsInstance(
        tree,
        {0: ZERO, 1: Rat(10), 2: ZERO, 3: ZERO},
        {1: ZERO, 2: ZERO, 3: ZERO},
        {1: ZERO, 2: Rat(1), 3: Rat(1)},
    )
    sol, dual = solve_eds_tree(inst)
    opt = brute_force_eds(inst)
    assert sol.total == opt.total == 2  # paying both penalties beats touching u
    assert dual.total == 2


def test_dual_matches_objective_on_random_trees():
    for seed in range(60):
        inst = gen_instance("random-tree-eds", n=3 + seed % 9, seed=seed)
        sol, dual = solve_eds_tree(inst)
        assert dual.total == sol.total
        for e, x in dual.xi.items():
            assert 0 <= x
            assert x <= inst.penalty[e] or inst.penalty[e] == INF


# -- optimality report ------------------------------------------------------


def test_verify_accepts_solver_output():
    inst = gen_instance("random-tree-eds", n=8, seed=3)
    sol, dual = solve_eds_tree(inst)
    report = verify_eds_optimality(inst, sol, dual.xi)
    assert report.passed, report.format()


def test_verify_rejects_overcharged_dual():
    inst = two_leaf_star(Rat(2), Rat(1))
    sol, dual = solve_eds_tree(inst)
    bad = dict(dual.xi)
    bad[1] = bad[1] + 1  # pushes the dual total past the optimum
    report = verify_eds_optimality(inst, sol, bad)
    assert not report.passed


def test_verify_zero_instance():
    tree = RootedTree([0, 0], 0)
    inst = EdsInstance(tree, {0: ZERO, 1: ZERO}, {1: ZERO}, {1: ZERO})
    sol, dual = solve_eds_tree(inst)
    report = verify_eds_optimality(inst, sol, dual.xi)
    assert report.passed
