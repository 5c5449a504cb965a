"""Approximate edge domination on general graphs via edge cover.

The solver rounds an exactly-solved fractional relaxation.  Nodes carrying at
least a quarter of fractional edge mass form a demand set; giving each such
node an incident chosen edge is a weighted edge-cover problem; and edge cover
on a normalized instance (demand nodes weightless and pairwise non-adjacent)
is facility location, solved greedily by best-ratio stars.  Every run checks
the inequalities that chain these stages together:

* the edge-cover relaxation of the built instance costs at most four times
  the fractional edge- and node-weight mass,
* the greedy cover costs at most H(#demand nodes) times that relaxation,
* the paid penalty is at most twice the fractional penalty mass.

``solve_eds_general`` reports the solution, the relaxation value it was
rounded from, and the factor 4*H(|V|) those inequalities target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from .instances import (
    EdgeCoverInstance,
    EdsInstance,
    FacilityLocationInstance,
    Graph,
    InstanceError,
    Solution,
    edge_neighborhoods,
    eds_solution,
)
from .lp import OPTIMAL, simplex_solve
from .relaxations import build_relaxation, extract_relaxation_point, relaxation_value
from .rationals import Rat, ZERO, is_inf

QUARTER = Rat(1, 4)
HALF = Rat(1, 2)
FOUR = Rat(4)


def harmonic(n: int) -> Rat:
    """H(n) = 1 + 1/2 + ... + 1/n as an exact rational (H(0) = 0)."""
    total = ZERO
    for k in range(1, n + 1):
        total += Rat(1, k)
    return total


@dataclass(frozen=True)
class Star:
    """A facility together with the clients charged to it in one greedy round.

    The cost covers the listed clients only: the facility's (remaining)
    opening cost plus their connection costs.
    """

    facility: int
    clients: Tuple[int, ...]
    cost: Rat


def build_edge_cover_instance(inst: EdsInstance, x: Dict[int, Rat]) -> EdgeCoverInstance:
    """Edge-cover instance whose demand nodes are the heavy nodes of ``x``.

    A node is heavy when its incident edges carry total fractional mass at
    least 1/4; any solution good against the relaxation can afford to touch
    all of them.  Heavy nodes get weight zero (every cover pays for them
    anyway), and each edge joining two heavy nodes is split by a fresh middle
    node carrying the edge's weight, with weightless halves, so that the
    demand set ends up pairwise non-adjacent.  ``edge_origin`` maps every
    edge of the result back to the edge of ``inst`` it stands for.
    """
    g = inst.graph
    load = {
        v: sum((x[e] for e in g.incident(v)), ZERO) for v in range(g.n)
    }
    demand = frozenset(v for v in range(g.n) if load[v] >= QUARTER)
    node_w = {v: (ZERO if v in demand else inst.node_weight[v]) for v in range(g.n)}
    edges: List[Tuple[int, int]] = []
    edge_w: Dict[int, Rat] = {}
    origin: Dict[int, int] = {}
    next_node = g.n
    for e in sorted(g.edge_ids()):
        u, v = g.ends(e)
        if u in demand and v in demand:
            s = next_node
            next_node += 1
            node_w[s] = inst.edge_weight[e]
            for a, b in ((u, s), (s, v)):
                eid = len(edges)
                edges.append((a, b))
                edge_w[eid] = ZERO
                origin[eid] = e
        else:
            eid = len(edges)
            edges.append((u, v))
            edge_w[eid] = inst.edge_weight[e]
            origin[eid] = e
    graph = Graph(next_node, edges)
    return EdgeCoverInstance(graph, demand, node_w, edge_w, origin)


def edge_cover_to_facility_location(
    cover: EdgeCoverInstance,
) -> Tuple[FacilityLocationInstance, List[int], List[int], Dict[Tuple[int, int], int]]:
    """View a normalized edge-cover instance as facility location.

    Demand nodes become clients, their neighbours become facilities; an edge
    between the two becomes a connection priced at the edge weight, and a
    facility's opening cost is its node weight.  Requires the normalized
    shape: demand nodes weightless and pairwise non-adjacent.  Returns the
    instance, the node ids behind client and facility indices, and the map
    from (client index, facility index) to the edge id realizing it.
    """
    g = cover.graph
    clients = sorted(cover.cover_nodes)
    client_index = {v: i for i, v in enumerate(clients)}
    facility_nodes: Set[int] = set()
    for v in clients:
        if cover.node_weight[v] != ZERO:
            raise InstanceError(f"demand node {v} must have weight zero")
        if not g.incident(v):
            raise InstanceError(f"infeasible: demand node {v} is isolated")
        for e in g.incident(v):
            a, b = g.ends(e)
            other = b if a == v else a
            if other in cover.cover_nodes:
                raise InstanceError(
                    f"demand nodes {v} and {other} are adjacent; subdivide first"
                )
            facility_nodes.add(other)
    facilities = sorted(facility_nodes)
    facility_index = {v: i for i, v in enumerate(facilities)}
    conn: Dict[Tuple[int, int], Rat] = {}
    edge_of: Dict[Tuple[int, int], int] = {}
    for v in clients:
        for e in sorted(g.incident(v)):
            a, b = g.ends(e)
            other = b if a == v else a
            key = (client_index[v], facility_index[other])
            conn[key] = cover.edge_weight[e]
            edge_of[key] = e
    fl = FacilityLocationInstance(
        n_clients=len(clients),
        n_facilities=len(facilities),
        opening=[cover.node_weight[f] for f in facilities],
        conn=conn,
    )
    return fl, clients, facilities, edge_of


def greedy_facility_location(
    inst: FacilityLocationInstance,
) -> Tuple[Tuple[int, ...], Dict[int, int], Rat]:
    """Serve every client by repeatedly buying the cheapest star per client.

    Each round scans, for every facility, the prefixes of the still-unserved
    clients it can reach in order of ascending connection cost, and buys the
    star minimizing (remaining opening cost + connection costs) / (clients
    served); an already-open facility contributes no opening cost to later
    stars.  Ties break by facility index, then by prefix length.  Returns
    the open facilities, the client->facility assignment, and the total cost
    (openings counted once plus all connections).
    """
    for v in range(inst.n_clients):
        if not any((v, f) in inst.conn for f in range(inst.n_facilities)):
            raise InstanceError(f"client {v} cannot reach any facility")
    unserved = set(range(inst.n_clients))
    opened: Set[int] = set()
    assignment: Dict[int, int] = {}
    total = ZERO
    while unserved:
        best: Tuple[Rat, int, int] = None  # (ratio, facility, prefix length)
        best_star: Star = None
        for f in range(inst.n_facilities):
            reach = sorted(
                (inst.conn[(v, f)], v) for v in unserved if (v, f) in inst.conn
            )
            if not reach:
                continue
            run = ZERO if f in opened else inst.opening[f]
            taken: List[int] = []
            for d, v in reach:
                run = run + d
                taken.append(v)
                key = (run / Rat(len(taken)), f, len(taken))
                if best is None or key < best:
                    best = key
                    best_star = Star(f, tuple(taken), run)
        star = best_star
        opened.add(star.facility)
        for v in star.clients:
            assignment[v] = star.facility
            unserved.discard(v)
        total += star.cost
    return tuple(sorted(opened)), assignment, total


def solve_eds_general(inst: EdsInstance) -> Tuple[Solution, Rat, Rat]:
    """Cover-or-pay edge domination on an arbitrary graph.

    Returns the solution, the exact relaxation value it was rounded from
    (a lower bound on the optimum), and the targeted factor 4*H(|V|).
    """
    g = inst.graph
    res = simplex_solve(build_relaxation(inst, "strengthened"))
    if res.status != OPTIMAL:
        raise InstanceError(f"relaxation unexpectedly {res.status}")
    xe, xv, z = extract_relaxation_point(inst, res)
    lower = res.value
    ratio = FOUR * harmonic(g.n)

    cover = build_edge_cover_instance(inst, xe)
    frac_cost = sum((inst.edge_weight[e] * xe[e] for e in xe), ZERO) + sum(
        (inst.node_weight[v] * xv[v] for v in xv), ZERO
    )
    cover_lp = relaxation_value(cover, "edge-cover")
    assert cover_lp <= FOUR * frac_cost, "edge-cover relaxation exceeds 4x fractional mass"

    chosen: Set[int] = set()
    if cover.cover_nodes:
        fl, clients, _, edge_of = edge_cover_to_facility_location(cover)
        _, assignment, greedy_cost = greedy_facility_location(fl)
        assert greedy_cost <= harmonic(len(clients)) * cover_lp, (
            "greedy cover exceeds harmonic times its relaxation"
        )
        lifted = {
            cover.edge_origin[edge_of[(i, assignment[i])]]
            for i in range(fl.n_clients)
        }
        # Several lifted edges can touch one demand node; it keeps only its
        # lowest-indexed one, which leaves every demand node covered.
        for v in clients:
            chosen.add(min(e for e in lifted if v in g.ends(e)))

    solution = eds_solution(inst, chosen)
    nbhd = edge_neighborhoods(g)
    dominated: Set[int] = set()
    for e in chosen:
        dominated.update(nbhd[e])
    penalty_mass = ZERO
    for e in sorted(g.edge_ids()):
        if z[e] <= HALF:
            assert e in dominated, f"edge {e} with violation <= 1/2 left undominated"
        if not is_inf(inst.penalty[e]):
            penalty_mass += inst.penalty[e] * z[e]
    assert solution.penalty <= 2 * penalty_mass, "paid penalty exceeds twice fractional"
    return solution, lower, ratio
