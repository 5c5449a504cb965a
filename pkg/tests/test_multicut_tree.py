"""Primal-dual tree multicut: reduction gadgets, frozen runs, verification."""

from graphcover import (
    INF,
    Demand,
    MulticutInstance,
    Rat,
    RootedTree,
    brute_force_multicut,
    deletion_phase,
    gen_instance,
    increase_iteration,
    is_inf,
    reduce_prize_collecting,
    relaxable_set,
    solve_multicut_tree,
    verify_multicut,
)
from graphcover.multicut_tree import IncreaseState, big_m_edges, run_increase_phase
from graphcover.rationals import ZERO

from _support import star_multicut


# -- penalty compilation ----------------------------------------------------


def test_reduction_is_noop_without_finite_penalties():
    inst = star_multicut(1, 2, INF)
    inst0, mapping = reduce_prize_collecting(inst)
    assert inst0 == inst
    assert mapping == {}


def test_reduction_adds_detour_gadget():
    inst = star_multicut(1, 2, Rat(5))
    inst0, mapping = reduce_prize_collecting(inst)
    assert inst0.tree.n == inst.tree.n + 2
    assert len(inst0.tree.edge_ids()) == len(inst.tree.edge_ids()) + 2
    assert all(is_inf(d.penalty) for d in inst0.demands)
    # the rerouted demand starts at the new far node and keeps its target
    d0 = inst0.demands[0]
    assert d0.t == inst.demands[0].t
    assert d0.s >= inst.tree.n
    # one gadget edge carries the old penalty, the guard edge is never worth cutting
    (pay_edge,) = mapping.values()
    assert inst0.edge_weight[pay_edge] == 5
    guards = big_m_edges(inst0, mapping)
    assert len(guards) == 1
    (guard,) = guards
    assert inst0.edge_weight[guard] > sum(
        w for w in inst.edge_weight.values()
    ) + sum(w for w in inst.node_weight.values())


def test_gadget_cut_means_paying_the_penalty():
    # cutting is expensive, the penalty is cheap: the solver pays it
    inst = star_multicut(10, 20, Rat(1))
    sol, dual, ratio = solve_multicut_tree(inst)
    assert sol.edges == ()
    assert sol.penalty == 1
    assert sol.total == 1


# -- frozen runs ------------------------------------------------------------


def test_two_leaf_star_cuts_cheap_edge():
    sol, dual, ratio = solve_multicut_tree(star_multicut(1, 2, INF))
    assert sol.edges == (1,)
    assert sol.total == 1
    assert dual.total == 1
    assert ratio == 1


def test_subdivided_star_within_factor_two():
    inst = gen_instance("subdivided-star-multicut", n=4)
    sol, dual, ratio = solve_multicut_tree(inst)
    assert sol.total >= 3  # the exact optimum
    assert sol.total <= 2 * dual.total


def test_zero_weight_instance_is_free():
    tree = RootedTree([0, 0, 0], 0)
    inst = MulticutInstance(
        tree,
        {v: ZERO for v in range(3)},
        {1: ZERO, 2: ZERO},
        [Demand(1, 2, INF)],
    )
    sol, dual, ratio = solve_multicut_tree(inst)
    assert sol.total == 0
    assert dual.total == 0
    assert ratio == 1


# -- increase phase internals ------------------------------------------------


def test_first_iteration_saturates_cheap_edge():
    inst0, _ = reduce_prize_collecting(star_multicut(1, 2, INF))
    state = increase_iteration(IncreaseState(inst0), 0)
    assert state.dual.xi[0] == 1
    assert state.dual.nu[(1, 0)] == 1  # the cheap edge is saturated
    assert state.F == {1}
    assert state.witness[0] == 1


def test_single_demand_everything_nonrelaxable():
    inst0, _ = reduce_prize_collecting(star_multicut(1, 2, INF))
    state = increase_iteration(IncreaseState(inst0), 0)
    # with one demand no earlier mu mass exists, so no node is relaxable
    assert relaxable_set(state, 0) == set()


def test_deletion_keeps_single_witness():
    inst0, _ = reduce_prize_collecting(star_multicut(3, 2, INF))
    state = run_increase_phase(IncreaseState(inst0))
    kept = deletion_phase(state)
    assert kept == frozenset({state.witness[0]})


# -- verification -----------------------------------------------------------


def test_verifier_accepts_pipeline_output():
    for seed in (0, 5, 9):
        inst = gen_instance("random-tree-multicut", n=8, k=3, seed=seed)
        inst0, _ = reduce_prize_collecting(inst)
        state = run_increase_phase(IncreaseState(inst0))
        kept = deletion_phase(state)
        report = verify_multicut(inst0, kept, state.dual)
        assert report.passed, report.format()


def test_verifier_rejects_empty_cut():
    inst0, _ = reduce_prize_collecting(star_multicut(1, 2, INF))
    state = run_increase_phase(IncreaseState(inst0))
    report = verify_multicut(inst0, frozenset(), state.dual)
    assert not report.passed
    assert any("demand" in f for f in report.failures())


def test_verifier_rejects_capacity_violation():
    inst0, _ = reduce_prize_collecting(star_multicut(1, 2, INF))
    state = run_increase_phase(IncreaseState(inst0))
    kept = deletion_phase(state)
    dual = state.dual
    dual.nu[(1, 0)] = dual.nu.get((1, 0), ZERO) + 5
    report = verify_multicut(inst0, kept, dual)
    assert not report.passed


# -- randomized battery ------------------------------------------------------


def test_factor_two_on_random_trees():
    for seed in range(50):
        inst = gen_instance(
            "random-tree-multicut",
            n=3 + seed % 7,
            k=1 + seed % 4,
            seed=seed,
            inf_prob=0.3,
        )
        sol, dual, ratio = solve_multicut_tree(inst)
        opt = brute_force_multicut(inst).total
        assert opt <= sol.total <= 2 * opt
        assert dual.total <= opt
        assert sol.total <= 2 * dual.total
