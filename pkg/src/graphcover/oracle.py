"""Exhaustive reference solvers for small instances.

These enumerate every candidate solution and are the ground truth the fast
solvers and relaxations are tested against.  All of them refuse instances
above a size cap, break objective ties by the lexicographically smallest
chosen index tuple, and use exact rational arithmetic throughout.
"""

from __future__ import annotations

from typing import Tuple, Union

from .instances import (
    EdgeCoverInstance,
    EdsInstance,
    FacilityLocationInstance,
    MulticutInstance,
    SetCoverInstance,
    Solution,
    edge_neighborhoods,
    eds_solution,
    multicut_solution,
)
from .rationals import ExtRat, INF, Rat, ZERO, ext_min, ext_sum, is_inf

#: Largest edge/set count the exhaustive solvers accept.
DEFAULT_CAP = 20


class OracleCapError(ValueError):
    """Raised when an instance is too large for exhaustive enumeration."""


def _check_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise OracleCapError(
            f"exhaustive search over {count} {what} exceeds the cap of {cap}"
        )


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def brute_force_eds(inst: EdsInstance, cap: int = DEFAULT_CAP) -> Solution:
    """Minimize w(F) + w(V(F)) + sum of penalties of edges untouched by F.

    Depth-first search over include/exclude decisions in edge-id order.
    A penalty is committed as soon as the last edge that could cover its
    edge has been excluded, so infinite penalties prune immediately, and
    partial cost above the incumbent prunes (penalties and weights are
    nonnegative, so partial cost is a valid lower bound).
    """
    g = inst.graph
    edges = sorted(g.edge_ids())
    _check_cap(len(edges), cap, "edges")
    m = len(edges)
    pos = {e: i for i, e in enumerate(edges)}
    nbhd = edge_neighborhoods(g)
    nb_mask = [0] * m
    node_mask = [0] * m
    for e in edges:
        i = pos[e]
        for f in nbhd[e]:
            nb_mask[i] |= 1 << pos[f]
        u, v = g.ends(e)
        node_mask[i] |= (1 << u) | (1 << v)
    ew = [inst.edge_weight[e] for e in edges]
    nw = [inst.node_weight[v] for v in range(g.n)]
    pen = [inst.penalty[e] for e in edges]
    # closers[i]: edges whose set of possible coverers ends at position i
    closers = [[] for _ in range(m)]
    for j in range(m):
        last = max(pos[f] for f in nbhd[edges[j]])
        closers[last].append(j)

    best_key = None

    def consider(edge_ids) -> None:
        nonlocal best_key
        sol = eds_solution(inst, edge_ids)
        if is_inf(sol.total):
            return
        key = (sol.total, sol.edges)
        if best_key is None or key < best_key:
            best_key = key

    # incumbent seeds: empty, everything, and a cheap greedy cover
    consider(())
    consider(tuple(edges))
    by_star_cost = sorted(
        edges, key=lambda e: (ew[pos[e]] + sum(nw[v] for v in g.ends(e)), e)
    )
    greedy, covered = [], 0
    for e in by_star_cost:
        if nb_mask[pos[e]] & ~covered:
            greedy.append(e)
            covered |= nb_mask[pos[e]]
    consider(tuple(sorted(greedy)))

    chosen: list = []

    def dfs(i: int, covered: int, nodes: int, cost) -> None:
        nonlocal best_key
        if best_key is not None and cost > best_key[0]:
            return
        if i == m:
            key = (cost, tuple(edges[j] for j in chosen))
            if best_key is None or key < best_key:
                best_key = key
            return
        # exclude edge i: penalties of edges with no remaining coverer are due
        extra = ZERO
        feasible = True
        for j in closers[i]:
            if not (covered >> j) & 1:
                if is_inf(pen[j]):
                    feasible = False
                    break
                extra += pen[j]
        if feasible:
            dfs(i + 1, covered, nodes, cost + extra)
        # include edge i
        ncost = cost + ew[i]
        for v in _bits(node_mask[i] & ~nodes):
            ncost += nw[v]
        chosen.append(i)
        dfs(i + 1, covered | nb_mask[i], nodes | node_mask[i], ncost)
        chosen.pop()

    dfs(0, 0, 0, ZERO)
    assert best_key is not None
    return eds_solution(inst, best_key[1])


def brute_force_multicut(inst: MulticutInstance, cap: int = DEFAULT_CAP) -> Solution:
    """Minimize w(F) + w(V(F)) + sum of penalties of demands not cut by F."""
    edges = sorted(inst.tree.edge_ids())
    _check_cap(len(edges), cap, "edges")
    m = len(edges)
    pos = {e: i for i, e in enumerate(edges)}
    node_mask = [0] * m
    for e in edges:
        u, v = inst.tree.ends(e)
        node_mask[pos[e]] |= (1 << u) | (1 << v)
    ew = [inst.edge_weight[e] for e in edges]
    nw = [inst.node_weight[v] for v in range(inst.tree.n)]
    path_mask = []
    for i in range(len(inst.demands)):
        path_mask.append(sum(1 << pos[e] for e in inst.path_edges(i)))
    pens = [d.penalty for d in inst.demands]

    best_key = None
    for fmask in range(1 << m):
        nodes = 0
        cost = ZERO
        for i in _bits(fmask):
            nodes |= node_mask[i]
            cost += ew[i]
        skip = False
        extra = ZERO
        for pm, p in zip(path_mask, pens):
            if not (fmask & pm):
                if is_inf(p):
                    skip = True  # cutting everything is finite, so skip
                    break
                extra += p
        if skip:
            continue
        cost += extra
        for v in _bits(nodes):
            cost += nw[v]
        key = (cost, tuple(edges[i] for i in _bits(fmask)))
        if best_key is None or key < best_key:
            best_key = key
    assert best_key is not None
    return multicut_solution(inst, best_key[1])


def brute_force_cover(
    inst: Union[SetCoverInstance, EdgeCoverInstance], cap: int = DEFAULT_CAP
) -> ExtRat:
    """Exhaustive minimum cover cost; INF when the instance is uncoverable."""
    if isinstance(inst, SetCoverInstance):
        _check_cap(len(inst.sets), cap, "sets")
        target = (1 << inst.n_elements) - 1
        masks = [sum(1 << x for x in members) for _, members in inst.sets]
        costs = [cost for cost, _ in inst.sets]
        best: ExtRat = INF
        for pick in range(1 << len(inst.sets)):
            covered = 0
            cost = ZERO
            for i in _bits(pick):
                covered |= masks[i]
                cost += costs[i]
            if covered & target == target and cost < best:
                best = cost
        return best
    g = inst.graph
    edges = sorted(g.edge_ids())
    _check_cap(len(edges), cap, "edges")
    pos = {e: i for i, e in enumerate(edges)}
    node_mask = [0] * len(edges)
    for e in edges:
        u, v = g.ends(e)
        node_mask[pos[e]] |= (1 << u) | (1 << v)
    ew = [inst.edge_weight[e] for e in edges]
    nw = [inst.node_weight[v] for v in range(g.n)]
    target = sum(1 << v for v in inst.cover_nodes)
    best = INF
    for pick in range(1 << len(edges)):
        nodes = 0
        cost = ZERO
        for i in _bits(pick):
            nodes |= node_mask[i]
            cost += ew[i]
        if nodes & target != target:
            continue
        for v in _bits(nodes):
            cost += nw[v]
        if cost < best:
            best = cost
    return best


def brute_force_facility_location(
    inst: FacilityLocationInstance, cap: int = DEFAULT_CAP
) -> ExtRat:
    """Exhaustive minimum of opening plus connection costs; INF if some
    client cannot reach any facility."""
    _check_cap(inst.n_facilities, cap, "facilities")
    best: ExtRat = INF
    for pick in range(1 << inst.n_facilities):
        open_f = list(_bits(pick))
        cost: ExtRat = sum((inst.opening[f] for f in open_f), ZERO)
        for v in range(inst.n_clients):
            d = ext_min(*(inst.conn.get((v, f), INF) for f in open_f)) if open_f else INF
            cost = cost + d
            if is_inf(cost):
                break
        if cost < best:
            best = cost
    return best
