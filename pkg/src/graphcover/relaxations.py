"""Linear-programming models for the covering problems.

Builders produce :class:`~graphcover.lp.LpModel` objects with a fixed
variable and row order (edges by id, nodes by id, demands by index) so that
solves are reproducible.  Infinite penalties never reach the models: a
demand with infinite penalty simply has no violation variable ``z``, and
infinite dual upper bounds are omitted.

Demand families: an edge-dominating instance has one demand per edge e,
consisting of the edges sharing an end node with e; a multicut instance has
one demand per terminal pair, consisting of its tree path.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple, Union

from .instances import (
    EdgeCoverInstance,
    EdsInstance,
    InstanceError,
    MulticutInstance,
    edge_neighborhoods,
)
from .lp import INFEASIBLE, LpModel, LpResult, OPTIMAL, simplex_solve
from .rationals import ONE, Rat, ZERO, is_inf

RELAXATION_KINDS = ("natural", "strengthened", "edge-cover")


def _demand_families(inst) -> List[Tuple[object, List[int], object]]:
    """(demand key, member edges, penalty) triples in canonical order."""
    if isinstance(inst, EdsInstance):
        nbhd = edge_neighborhoods(inst.graph)
        return [(e, list(nbhd[e]), inst.penalty[e]) for e in sorted(inst.graph.edge_ids())]
    if isinstance(inst, MulticutInstance):
        return [
            (i, sorted(inst.path_edges(i)), d.penalty)
            for i, d in enumerate(inst.demands)
        ]
    raise InstanceError(f"no demand family for {type(inst).__name__}")


def _graph_of(inst):
    return inst.graph if isinstance(inst, EdsInstance) else inst.tree


def build_relaxation(inst, kind: str) -> LpModel:
    """Fractional relaxation of an instance as an explicit LP model.

    natural: variables x(e), x(v), z(C); rows sum_{e in C} x(e) >= 1 - z(C)
    and x(v) >= x(e) for e incident to v.  z(C) exists only for finite
    penalties (an infinite penalty pins the violation variable to zero).

    strengthened: the natural model plus per-demand variables y(C,e) with
    rows sum_{e in C} y(C,e) >= 1 - z(C), x(v) >= sum of y(C,e) over
    member edges incident to v, and x(e) >= y(C,e).

    edge-cover: for an EdgeCoverInstance, rows sum_{e at v} x(e) >= 1 for
    each demand node v, and x(v) >= x(e) for e incident to v.
    """
    if kind not in RELAXATION_KINDS:
        raise InstanceError(f"unknown relaxation kind {kind!r}")
    if kind == "edge-cover":
        if not isinstance(inst, EdgeCoverInstance):
            raise InstanceError("edge-cover relaxation needs an edge-cover instance")
        return _build_edge_cover_lp(inst)
    if not isinstance(inst, (EdsInstance, MulticutInstance)):
        raise InstanceError(f"{kind} relaxation needs an EDS or multicut instance")

    g = _graph_of(inst)
    demands = _demand_families(inst)
    model = LpModel(name=f"{kind}")
    edge_ids = sorted(g.edge_ids())
    for e in edge_ids:
        model.add_var(f"x_e{e}", obj=inst.edge_weight[e])
    for v in range(g.n):
        model.add_var(f"x_v{v}", obj=inst.node_weight[v])
    z_keys = []
    for c, _, pen in demands:
        if not is_inf(pen):
            model.add_var(f"z_{c}", obj=pen)
            z_keys.append(c)
    zset = set(z_keys)

    for c, members, _ in demands:
        coeffs = {f"x_e{e}": ONE for e in members}
        if c in zset:
            coeffs[f"z_{c}"] = ONE
        model.add_constraint(f"cover_{c}", coeffs, ">=", ONE)
    for v in range(g.n):
        for e in sorted(g.incident(v)):
            model.add_constraint(
                f"node_v{v}_e{e}", {f"x_v{v}": ONE, f"x_e{e}": -ONE}, ">=", ZERO
            )

    if kind == "strengthened":
        for c, members, _ in demands:
            for e in members:
                model.add_var(f"y_{c}_{e}")
        for c, members, _ in demands:
            coeffs = {f"y_{c}_{e}": ONE for e in members}
            if c in zset:
                coeffs[f"z_{c}"] = ONE
            model.add_constraint(f"ycover_{c}", coeffs, ">=", ONE)
            at_node: Dict[int, List[int]] = {}
            for e in members:
                u, v = g.ends(e)
                at_node.setdefault(u, []).append(e)
                at_node.setdefault(v, []).append(e)
            for v in sorted(at_node):
                coeffs = {f"x_v{v}": ONE}
                for e in at_node[v]:
                    coeffs[f"y_{c}_{e}"] = -ONE
                model.add_constraint(f"ynode_{c}_v{v}", coeffs, ">=", ZERO)
            for e in members:
                model.add_constraint(
                    f"yedge_{c}_e{e}", {f"x_e{e}": ONE, f"y_{c}_{e}": -ONE}, ">=", ZERO
                )
    return model


def _build_edge_cover_lp(inst: EdgeCoverInstance) -> LpModel:
    g = inst.graph
    model = LpModel(name="edge-cover")
    for e in sorted(g.edge_ids()):
        model.add_var(f"x_e{e}", obj=inst.edge_weight[e])
    for v in range(g.n):
        model.add_var(f"x_v{v}", obj=inst.node_weight[v])
    for v in sorted(inst.cover_nodes):
        coeffs = {f"x_e{e}": ONE for e in g.incident(v)}
        model.add_constraint(f"cover_v{v}", coeffs, ">=", ONE)
    for v in range(g.n):
        for e in sorted(g.incident(v)):
            model.add_constraint(
                f"node_v{v}_e{e}", {f"x_v{v}": ONE, f"x_e{e}": -ONE}, ">=", ZERO
            )
    return model


def relaxation_value(inst, kind: str) -> Rat:
    """Optimal value of the built relaxation (must be feasible and bounded)."""
    res = simplex_solve(build_relaxation(inst, kind))
    if res.status != OPTIMAL:
        raise InstanceError(f"{kind} relaxation unexpectedly {res.status}")
    return res.value


def extract_relaxation_point(inst, result: LpResult):
    """Split an optimal relaxation assignment into x(edge), x(node), z maps."""
    g = _graph_of(inst)
    xe = {e: result.assignment.get(f"x_e{e}", ZERO) for e in sorted(g.edge_ids())}
    xv = {v: result.assignment.get(f"x_v{v}", ZERO) for v in range(g.n)}
    z = {}
    for c, _, pen in _demand_families(inst):
        z[c] = result.assignment.get(f"z_{c}", ZERO) if not is_inf(pen) else ZERO
    return xe, xv, z


# ---------------------------------------------------------------------------
# dual models


def build_eds_dual(inst: EdsInstance) -> LpModel:
    """Dual of the strengthened relaxation for edge-dominating instances.

    maximize sum xi(e) subject to
      (capacity per edge e')   sum_{e in N[e']} nu(e', e) <= w(e')
      (capacity per node v)    sum_{e in N'[v]} mu(v, e)  <= w(v)
      (support, per e and e' in N[e], e'=uv)
                               xi(e) <= mu(u, e) + mu(v, e) + nu(e', e)
      (penalty cap)            xi(e) <= pi(e)   [omitted when infinite]

    N[e'] is the closed edge neighborhood of e'; N'[v] collects the
    neighborhoods of all edges incident to v.
    """
    g = inst.graph
    nbhd = edge_neighborhoods(g)
    edge_ids = sorted(g.edge_ids())
    near_node: Dict[int, List[int]] = {}
    for v in range(g.n):
        seen = set()
        for f in g.incident(v):
            seen.update(nbhd[f])
        near_node[v] = sorted(seen)

    model = LpModel(name="eds-dual", sense="max")
    for e in edge_ids:
        model.add_var(f"xi_{e}", obj=ONE)
    for ep in edge_ids:
        for e in nbhd[ep]:
            model.add_var(f"nu_{ep}_{e}")
    for v in range(g.n):
        for e in near_node[v]:
            model.add_var(f"mu_{v}_{e}")

    for ep in edge_ids:
        model.add_constraint(
            f"edge_cap_{ep}",
            {f"nu_{ep}_{e}": ONE for e in nbhd[ep]},
            "<=",
            inst.edge_weight[ep],
        )
    for v in range(g.n):
        if near_node[v]:
            model.add_constraint(
                f"node_cap_{v}",
                {f"mu_{v}_{e}": ONE for e in near_node[v]},
                "<=",
                inst.node_weight[v],
            )
    for e in edge_ids:
        for ep in nbhd[e]:
            u, v = g.ends(ep)
            coeffs = {f"xi_{e}": ONE, f"nu_{ep}_{e}": -ONE}
            coeffs[f"mu_{u}_{e}"] = coeffs.get(f"mu_{u}_{e}", ZERO) - ONE
            coeffs[f"mu_{v}_{e}"] = coeffs.get(f"mu_{v}_{e}", ZERO) - ONE
            model.add_constraint(f"support_{e}_{ep}", coeffs, "<=", ZERO)
    for e in edge_ids:
        if not is_inf(inst.penalty[e]):
            model.add_constraint(
                f"pen_cap_{e}", {f"xi_{e}": ONE}, "<=", inst.penalty[e]
            )
    return model


def build_multicut_dual(inst: MulticutInstance) -> LpModel:
    """Dual of the strengthened relaxation for multicut instances.

    maximize sum xi(i) subject to
      (support)  xi(i) <= nu(e, i) + mu(u_e, i) + mu(l_e, i)  for e on path i
      (edge capacity)  sum_i nu(e, i) <= w(e)
      (node capacity)  sum_i mu(v, i) <= w(v)
      (penalty cap)    xi(i) <= pi(i)   [omitted when infinite]
    """
    tree = inst.tree
    k = len(inst.demands)
    paths = [inst.path_edges(i) for i in range(k)]
    pnodes = [inst.path_nodes(i) for i in range(k)]

    model = LpModel(name="multicut-dual", sense="max")
    for i in range(k):
        model.add_var(f"xi_{i}", obj=ONE)
    for i in range(k):
        for e in sorted(paths[i]):
            model.add_var(f"nu_{e}_{i}")
    for i in range(k):
        for v in sorted(pnodes[i]):
            model.add_var(f"mu_{v}_{i}")

    for i in range(k):
        for e in sorted(paths[i]):
            u, l = tree.ends(e)
            model.add_constraint(
                f"support_{i}_{e}",
                {
                    f"xi_{i}": ONE,
                    f"nu_{e}_{i}": -ONE,
                    f"mu_{u}_{i}": -ONE,
                    f"mu_{l}_{i}": -ONE,
                },
                "<=",
                ZERO,
            )
    edge_users: Dict[int, List[int]] = {}
    node_users: Dict[int, List[int]] = {}
    for i in range(k):
        for e in paths[i]:
            edge_users.setdefault(e, []).append(i)
        for v in pnodes[i]:
            node_users.setdefault(v, []).append(i)
    for e in sorted(edge_users):
        model.add_constraint(
            f"edge_cap_{e}",
            {f"nu_{e}_{i}": ONE for i in edge_users[e]},
            "<=",
            inst.edge_weight[e],
        )
    for v in sorted(node_users):
        model.add_constraint(
            f"node_cap_{v}",
            {f"mu_{v}_{i}": ONE for i in node_users[v]},
            "<=",
            inst.node_weight[v],
        )
    for i in range(k):
        if not is_inf(inst.demands[i].penalty):
            model.add_constraint(
                f"pen_cap_{i}", {f"xi_{i}": ONE}, "<=", inst.demands[i].penalty
            )
    return model


# ---------------------------------------------------------------------------
# dual completion


def complete_eds_dual(
    inst: EdsInstance, xi: Dict[int, Rat]
) -> Optional[Tuple[Dict[Tuple[int, int], Rat], Dict[Tuple[int, int], Rat]]]:
    """Find nu, mu turning xi into a full feasible dual, or None if impossible.

    Solved as an exact LP feasibility problem (zero objective) over the
    capacity and support constraints of :func:`build_eds_dual` with xi fixed.
    Pairs involving an edge with xi(e) = 0 are dropped: their support rows
    hold trivially and zero values only relax the capacities, so the
    reduced problem is feasible exactly when the full one is.  Returned maps
    contain only the retained pairs; absent pairs are zero.

    Raises ValueError when xi is negative or exceeds a penalty.
    """
    g = inst.graph
    edge_ids = sorted(g.edge_ids())
    if sorted(xi) != edge_ids:
        raise ValueError("xi must assign a value to every edge")
    for e in edge_ids:
        if xi[e] < 0:
            raise ValueError(f"xi({e}) is negative")
        if xi[e] > inst.penalty[e]:
            raise ValueError(f"xi({e}) exceeds the penalty of edge {e}")
    nbhd = edge_neighborhoods(g)
    active = [e for e in edge_ids if xi[e] > 0]
    if not active:
        return {}, {}
    active_set = set(active)

    model = LpModel(name="dual-completion")
    nu_pairs = []  # (e', e) with e in N[e'] and xi(e) > 0
    for ep in edge_ids:
        for e in nbhd[ep]:
            if e in active_set:
                model.add_var(f"nu_{ep}_{e}")
                nu_pairs.append((ep, e))
    mu_pairs = []  # (v, e) with e in N'[v] and xi(e) > 0
    for v in range(g.n):
        seen = set()
        for f in g.incident(v):
            seen.update(nbhd[f])
        for e in sorted(seen & active_set):
            model.add_var(f"mu_{v}_{e}")
            mu_pairs.append((v, e))

    by_ep: Dict[int, List[int]] = {}
    for ep, e in nu_pairs:
        by_ep.setdefault(ep, []).append(e)
    for ep in sorted(by_ep):
        model.add_constraint(
            f"edge_cap_{ep}",
            {f"nu_{ep}_{e}": ONE for e in by_ep[ep]},
            "<=",
            inst.edge_weight[ep],
        )
    by_v: Dict[int, List[int]] = {}
    for v, e in mu_pairs:
        by_v.setdefault(v, []).append(e)
    for v in sorted(by_v):
        model.add_constraint(
            f"node_cap_{v}",
            {f"mu_{v}_{e}": ONE for e in by_v[v]},
            "<=",
            inst.node_weight[v],
        )
    for e in active:
        for ep in nbhd[e]:
            u, v = g.ends(ep)
            coeffs = {f"nu_{ep}_{e}": ONE}
            coeffs[f"mu_{u}_{e}"] = coeffs.get(f"mu_{u}_{e}", ZERO) + ONE
            coeffs[f"mu_{v}_{e}"] = coeffs.get(f"mu_{v}_{e}", ZERO) + ONE
            model.add_constraint(f"support_{e}_{ep}", coeffs, ">=", xi[e])

    res = simplex_solve(model)
    if res.status == INFEASIBLE:
        return None
    assert res.status == OPTIMAL
    nu = {}
    for ep, e in nu_pairs:
        val = res.assignment.get(f"nu_{ep}_{e}", ZERO)
        if val:
            nu[(ep, e)] = val
    mu = {}
    for v, e in mu_pairs:
        val = res.assignment.get(f"mu_{v}_{e}", ZERO)
        if val:
            mu[(v, e)] = val
    return nu, mu
