"""Primal-dual 2-approximation for prize-collecting multicut on weighted trees.

Pipeline: finite demand penalties are compiled away by attaching a
two-edge pendant per demand (cutting its cheap edge equals paying the
penalty), leaving an instance where every demand must be separated.  The
increase phase grows one dual value per demand path, raising edge/node
capacities until a fully saturated ("bottleneck") path edge with
immovable dual mass at both ends appears; that edge joins the solution.
The deletion phase then thins the solution so every demand contributes
its dual value to at most two chosen edges, which yields the factor-2
bound objective <= 2 * (sum of dual values) certified in the output.

All arithmetic is exact; each dual adjustment step is sized by a small
rational LP (maximize the step, then minimize the total perturbation for
determinism) over exactly the moves the relaxation rules allow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .instances import (
    Demand,
    InstanceError,
    MulticutInstance,
    RootedTree,
    Solution,
    multicut_solution,
)
from .lp import OPTIMAL, LpModel, simplex_solve
from .rationals import INF, ONE, Rat, ZERO, is_inf
from .reporting import CheckReport


@dataclass(frozen=True)
class MulticutDual:
    """Sparse dual values: xi per demand, nu per (edge, demand) with the
    edge on that demand's path, mu per (node, demand) likewise."""

    xi: Dict[int, Rat]
    nu: Dict[Tuple[int, int], Rat]
    mu: Dict[Tuple[int, int], Rat]

    @property
    def total(self) -> Rat:
        return sum(self.xi.values(), ZERO)


# ---------------------------------------------------------------------------
# prize-collecting reduction


def reduce_prize_collecting(
    inst: MulticutInstance,
) -> Tuple[MulticutInstance, Dict[int, int]]:
    """Compile finite demand penalties into pendant edges.

    Per finite-penalty demand i, new nodes s', s'' hang off s_i; the edge
    s-s' carries a big-M weight (never worth cutting), the edge s'-s''
    carries the penalty, and the demand becomes (s'', t_i) with infinite
    penalty.  Returns the new instance and a map from each such demand
    index to its penalty-encoding edge id.  Instances whose penalties are
    all infinite pass through unchanged with an empty map.
    """
    if not isinstance(inst, MulticutInstance):
        raise InstanceError("prize-collecting reduction needs a multicut instance")
    finite = [i for i, d in enumerate(inst.demands) if not is_inf(d.penalty)]
    if not finite:
        return inst, {}
    big_m = ONE + sum(inst.edge_weight.values(), ZERO) + sum(
        inst.node_weight.values(), ZERO
    )
    big_m += sum((inst.demands[i].penalty for i in finite), ZERO)

    n = inst.tree.n
    parent = list(inst.tree.parent)
    node_w = dict(inst.node_weight)
    edge_w = dict(inst.edge_weight)
    demands = list(inst.demands)
    mapping: Dict[int, int] = {}
    for count, i in enumerate(finite):
        d = inst.demands[i]
        prime = n + 2 * count
        second = n + 2 * count + 1
        parent.append(d.s)
        parent.append(prime)
        node_w[prime] = ZERO
        node_w[second] = ZERO
        edge_w[prime] = big_m
        edge_w[second] = d.penalty
        demands[i] = Demand(second, d.t, INF)
        mapping[i] = second
    tree = RootedTree(parent, inst.tree.root)
    out = MulticutInstance(tree, node_w, edge_w, demands)
    return out, mapping


def big_m_edges(inst0: MulticutInstance, mapping: Dict[int, int]) -> FrozenSet[int]:
    """The never-cut pendant edges introduced by the reduction."""
    return frozenset(inst0.tree.parent[pen_edge] for pen_edge in mapping.values())


# ---------------------------------------------------------------------------
# increase-phase state


class _Snapshot:
    """Classification of the current dual: which (edge, demand) rows are
    tight, which capacities are saturated, which path-edge rows are fully
    pinned ("bottleneck"), and which (node, demand) dual mass is immovable
    ("non-relaxable" per the fixed-point rule)."""

    __slots__ = ("tight", "sat_edge", "sat_node", "bottleneck", "nonrelax",
                 "nu_sum", "mu_sum")

    def __init__(self, state: "IncreaseState"):
        inst = state.instance
        nu_sum: Dict[int, Rat] = {e: ZERO for e in inst.tree.edge_ids()}
        mu_sum: Dict[int, Rat] = {v: ZERO for v in range(inst.tree.n)}
        for (e, _), val in state.nu.items():
            nu_sum[e] += val
        for (v, _), val in state.mu.items():
            mu_sum[v] += val
        self.nu_sum = nu_sum
        self.mu_sum = mu_sum
        self.sat_edge = {e for e in nu_sum if nu_sum[e] == inst.edge_weight[e]}
        self.sat_node = {v for v in mu_sum if mu_sum[v] == inst.node_weight[v]}
        tight = set()
        for d in range(len(inst.demands)):
            for e in state.path_edges[d]:
                lhs = (
                    state.nu.get((e, d), ZERO)
                    + state.mu.get((inst.tree.parent[e], d), ZERO)
                    + state.mu.get((e, d), ZERO)
                )
                if lhs == state.xi.get(d, ZERO):
                    tight.add((e, d))
        self.tight = tight
        self.bottleneck = {
            (e, d)
            for (e, d) in tight
            if e in self.sat_edge
            and inst.tree.parent[e] in self.sat_node
            and e in self.sat_node
        }
        self.nonrelax = self._nonrelax_fixed_point(state)

    def _nonrelax_fixed_point(self, state: "IncreaseState") -> Set[Tuple[int, int]]:
        nonrelax: Set[Tuple[int, int]] = set()
        pairs = [
            (v, d)
            for d in range(len(state.instance.demands))
            for v in state.path_nodes[d]
        ]
        changed = True
        while changed:
            changed = False
            for v, d in pairs:
                if (v, d) in nonrelax:
                    continue
                blocked = True
                for j in state.decrease_targets(d, v):
                    if not any(
                        (f, j) in self.bottleneck
                        and (state.far_end(f, v), j) in nonrelax
                        for f in state.edges_at[j].get(v, ())
                    ):
                        blocked = False
                        break
                if blocked:
                    nonrelax.add((v, d))
                    changed = True
        return nonrelax


class IncreaseState:
    """Mutable state of the increase phase on an all-infinite-penalty
    instance: the growing edge set F, sparse duals, the witness edge per
    processed demand, and the processed list in processing order."""

    def __init__(self, inst: MulticutInstance):
        if not isinstance(inst, MulticutInstance):
            raise InstanceError("increase phase needs a multicut instance")
        if any(not is_inf(d.penalty) for d in inst.demands):
            raise InstanceError(
                "increase phase needs all demand penalties infinite; "
                "apply the prize-collecting reduction first"
            )
        self.instance = inst
        k = len(inst.demands)
        self.order: List[int] = sorted(
            range(k), key=lambda i: (-inst.tree.depth[inst.lca(i)], i)
        )
        self.position: Dict[int, int] = {d: p for p, d in enumerate(self.order)}
        self.path_edges: List[List[int]] = [inst.path_edges(i) for i in range(k)]
        self.edge_set: List[FrozenSet[int]] = [frozenset(p) for p in self.path_edges]
        self.path_nodes: List[List[int]] = [inst.path_nodes(i) for i in range(k)]
        self.node_set: List[FrozenSet[int]] = [frozenset(p) for p in self.path_nodes]
        self.legs: List[Tuple[FrozenSet[int], FrozenSet[int]]] = []
        for i in range(k):
            d, a = inst.demands[i], inst.lca(i)
            up, x = [], d.s
            while x != a:
                up.append(x)
                x = inst.tree.parent[x]
            down, x = [], d.t
            while x != a:
                down.append(x)
                x = inst.tree.parent[x]
            self.legs.append((frozenset(up), frozenset(down)))
        self.edges_at: List[Dict[int, List[int]]] = []
        for i in range(k):
            at: Dict[int, List[int]] = {}
            for e in self.path_edges[i]:
                at.setdefault(inst.tree.parent[e], []).append(e)
                at.setdefault(e, []).append(e)
            self.edges_at.append({v: sorted(es) for v, es in at.items()})

        self.xi: Dict[int, Rat] = {}
        self.nu: Dict[Tuple[int, int], Rat] = {}
        self.mu: Dict[Tuple[int, int], Rat] = {}
        self.F: Set[int] = set()
        self.witness: Dict[int, int] = {}
        self.processed: List[int] = []
        # (demand, node) -> the path edge pinned there when immovable dual
        # mass was chased; the deletion phase prefers these so that demands
        # first covered by a chased edge stay covered
        self.cascade_edge: Dict[Tuple[int, int], int] = {}

    # -- small helpers -----------------------------------------------------

    def far_end(self, e: int, v: int) -> int:
        upper = self.instance.tree.parent[e]
        return e if v == upper else upper

    def decrease_targets(self, d: int, v: int) -> List[int]:
        """Demands processed before d holding positive dual mass at v."""
        p = self.position[d]
        return [
            j
            for j in self.order[:p]
            if self.mu.get((v, j), ZERO) > 0
        ]

    def uncovered(self) -> Optional[int]:
        for d in self.order:
            if not (self.F & self.edge_set[d]):
                return d
        return None

    @property
    def dual(self) -> MulticutDual:
        return MulticutDual(
            xi={d: v for d, v in sorted(self.xi.items()) if v > 0},
            nu={key: v for key, v in sorted(self.nu.items()) if v > 0},
            mu={key: v for key, v in sorted(self.mu.items()) if v > 0},
        )

    def snapshot(self) -> _Snapshot:
        return _Snapshot(self)

    def assert_feasible(self) -> None:
        inst = self.instance
        snap_nu: Dict[int, Rat] = {}
        for (e, _), val in self.nu.items():
            assert val >= 0
            snap_nu[e] = snap_nu.get(e, ZERO) + val
        for e, tot in snap_nu.items():
            assert tot <= inst.edge_weight[e], f"edge capacity violated at {e}"
        snap_mu: Dict[int, Rat] = {}
        for (v, _), val in self.mu.items():
            assert val >= 0
            snap_mu[v] = snap_mu.get(v, ZERO) + val
        for v, tot in snap_mu.items():
            assert tot <= inst.node_weight[v], f"node capacity violated at {v}"
        for d in range(len(inst.demands)):
            for e in self.path_edges[d]:
                lhs = (
                    self.nu.get((e, d), ZERO)
                    + self.mu.get((inst.tree.parent[e], d), ZERO)
                    + self.mu.get((e, d), ZERO)
                )
                assert self.xi.get(d, ZERO) <= lhs, f"support row violated ({e},{d})"


# ---------------------------------------------------------------------------
# increase phase


def _minimize_nu(state: IncreaseState) -> None:
    """Lower every nu value to the least amount its support row needs."""
    for e, d in sorted(state.nu, reverse=True):
        upper = state.instance.tree.parent[e]
        needed = (
            state.xi.get(d, ZERO)
            - state.mu.get((upper, d), ZERO)
            - state.mu.get((e, d), ZERO)
        )
        if needed < 0:
            needed = ZERO
        assert needed <= state.nu[(e, d)]
        if needed > 0:
            state.nu[(e, d)] = needed
        else:
            del state.nu[(e, d)]


def _select_cover(
    state: IncreaseState, d: int, snap: _Snapshot
) -> Tuple[List[int], List[int], List[int]]:
    """Greedy minimal cover of the tight path edges: H gets unsaturated
    edges, U unsaturated nodes, R relaxable ends of bottleneck edges."""
    H: List[int] = []
    U: List[int] = []
    R: List[int] = []
    chosen_nodes: Set[int] = set()
    for e in state.path_edges[d]:
        if (e, d) not in snap.tight:
            continue
        upper = state.instance.tree.parent[e]
        if e in H or upper in chosen_nodes or e in chosen_nodes:
            continue
        if (e, d) in snap.bottleneck:
            ends = [v for v in sorted((upper, e)) if (v, d) not in snap.nonrelax]
            assert ends, "bottleneck with no relaxable end must terminate the loop"
            R.append(ends[0])
            chosen_nodes.add(ends[0])
        elif e not in snap.sat_edge:
            H.append(e)
        else:
            ends = [v for v in sorted((upper, e)) if v not in snap.sat_node]
            assert ends, "saturated tight edge with saturated ends is a bottleneck"
            U.append(ends[0])
            chosen_nodes.add(ends[0])
    return H, U, R


def _sanction_moves(
    state: IncreaseState, d: int, R: List[int], snap: _Snapshot
) -> Tuple[Set[Tuple[int, int]], Set[Tuple[int, int]], Set[Tuple[int, int]]]:
    """Moves the relaxation rules allow: decreases of mu at relaxable
    nodes and the compensating increases along earlier demand paths."""
    dec: Set[Tuple[int, int]] = set()
    inc_nu: Set[Tuple[int, int]] = set()
    inc_mu: Set[Tuple[int, int]] = set()
    visited: Set[Tuple[int, int]] = set()

    def dec_allowed(v: int, j: int) -> bool:
        return all(
            not (
                (f, j) in snap.bottleneck
                and (state.far_end(f, v), j) in snap.nonrelax
            )
            for f in state.edges_at[j].get(v, ())
        )

    def expand(v: int, m: int) -> None:
        if (v, m) in visited:
            return
        visited.add((v, m))
        for j in state.decrease_targets(m, v):
            if not dec_allowed(v, j) or (v, j) in dec:
                continue
            dec.add((v, j))
            for f in state.edges_at[j].get(v, ()):
                u = state.far_end(f, v)
                if (f, j) in snap.bottleneck:
                    inc_mu.add((u, j))
                    expand(u, j)
                elif (f, j) in snap.tight:
                    if f not in snap.sat_edge:
                        inc_nu.add((f, j))
                    if u not in snap.sat_node:
                        inc_mu.add((u, j))

    for v in R:
        expand(v, d)
    return dec, inc_nu, inc_mu


def _step_lp(
    state: IncreaseState,
    d: int,
    H: List[int],
    U: List[int],
    R: List[int],
    moves: Tuple[Set[Tuple[int, int]], Set[Tuple[int, int]], Set[Tuple[int, int]]],
    snap: _Snapshot,
) -> Rat:
    """Largest feasible simultaneous step, then the least total
    perturbation achieving it; applies the update and returns the step."""
    inst = state.instance
    dec, inc_nu, inc_mu = (sorted(m) for m in moves)
    raised = set(U) | set(R)

    model = LpModel(f"step_demand{d}", sense="max")
    model.add_var("eps", obj=ONE)
    dn_names = {key: f"dn_e{key[0]}_d{key[1]}" for key in inc_nu}
    dp_names = {key: f"dp_v{key[0]}_d{key[1]}" for key in inc_mu}
    dm_names = {key: f"dm_v{key[0]}_d{key[1]}" for key in dec}
    for key in inc_nu:
        model.add_var(dn_names[key])
    for key in inc_mu:
        model.add_var(dp_names[key])
    for key in dec:
        model.add_var(dm_names[key])

    def nu_delta(e: int, j: int) -> Dict[str, Rat]:
        out: Dict[str, Rat] = {}
        if j == d and e in H:
            out["eps"] = out.get("eps", ZERO) + ONE
        if (e, j) in dn_names:
            out[dn_names[(e, j)]] = ONE
        return out

    def mu_delta(v: int, j: int) -> Dict[str, Rat]:
        out: Dict[str, Rat] = {}
        if j == d and v in raised:
            out["eps"] = out.get("eps", ZERO) + ONE
        if (v, j) in dp_names:
            out[dp_names[(v, j)]] = out.get(dp_names[(v, j)], ZERO) + ONE
        if (v, j) in dm_names:
            out[dm_names[(v, j)]] = out.get(dm_names[(v, j)], ZERO) - ONE
        return out

    def merge(target: Dict[str, Rat], part: Dict[str, Rat], scale: Rat) -> None:
        for name, coeff in part.items():
            target[name] = target.get(name, ZERO) + scale * coeff

    # support rows: current slack + change(nu + mu_upper + mu_lower - xi) >= 0
    for j in range(len(inst.demands)):
        for e in state.path_edges[j]:
            upper = inst.tree.parent[e]
            coeffs: Dict[str, Rat] = {}
            merge(coeffs, nu_delta(e, j), ONE)
            merge(coeffs, mu_delta(upper, j), ONE)
            merge(coeffs, mu_delta(e, j), ONE)
            if j == d:
                coeffs["eps"] = coeffs.get("eps", ZERO) - ONE
            coeffs = {n: c for n, c in coeffs.items() if c != 0}
            if not coeffs:
                continue
            slack = (
                state.nu.get((e, j), ZERO)
                + state.mu.get((upper, j), ZERO)
                + state.mu.get((e, j), ZERO)
                - state.xi.get(j, ZERO)
            )
            model.add_constraint(f"support_e{e}_d{j}", coeffs, ">=", -slack)
    # capacity rows
    for e in inst.tree.edge_ids():
        coeffs = {}
        for j in range(len(inst.demands)):
            if e in state.edge_set[j]:
                merge(coeffs, nu_delta(e, j), ONE)
        coeffs = {n: c for n, c in coeffs.items() if c != 0}
        if coeffs:
            model.add_constraint(
                f"edgecap_e{e}", coeffs, "<=", inst.edge_weight[e] - snap.nu_sum[e]
            )
    for v in range(inst.tree.n):
        coeffs = {}
        for j in range(len(inst.demands)):
            if v in state.node_set[j]:
                merge(coeffs, mu_delta(v, j), ONE)
        coeffs = {n: c for n, c in coeffs.items() if c != 0}
        if coeffs:
            model.add_constraint(
                f"nodecap_v{v}", coeffs, "<=", inst.node_weight[v] - snap.mu_sum[v]
            )
    for key in dec:
        model.add_constraint(
            f"decbound_v{key[0]}_d{key[1]}",
            {dm_names[key]: ONE},
            "<=",
            state.mu[key],
        )

    first = simplex_solve(model)
    assert first.status == OPTIMAL, f"step sizing failed: {first.status}"
    eps = first.value

    refine = LpModel(f"refine_demand{d}", sense="min")
    refine.add_var("eps")
    for name in model.variables[1:]:
        refine.add_var(name, obj=ONE)
    refine.constraints = list(model.constraints)
    refine.add_constraint("pin_eps", {"eps": ONE}, "==", eps)
    second = simplex_solve(refine)
    assert second.status == OPTIMAL

    state.xi[d] = state.xi.get(d, ZERO) + eps
    for e in H:
        state.nu[(e, d)] = state.nu.get((e, d), ZERO) + eps
    for v in raised:
        state.mu[(v, d)] = state.mu.get((v, d), ZERO) + eps
    for key in inc_nu:
        val = second[dn_names[key]]
        if val > 0:
            state.nu[key] = state.nu.get(key, ZERO) + val
    for key in inc_mu:
        val = second[dp_names[key]]
        if val > 0:
            state.mu[key] = state.mu.get(key, ZERO) + val
    for key in dec:
        val = second[dm_names[key]]
        if val > 0:
            left = state.mu[key] - val
            if left > 0:
                state.mu[key] = left
            else:
                assert left == 0
                del state.mu[key]
    state.assert_feasible()
    return eps


def _fact5_additions(state: IncreaseState, wit: int, d: int, snap: _Snapshot) -> None:
    """Chase immovable dual mass: every earlier demand holding mass at an
    end of a newly added edge gets one of its own pinned path edges added."""
    tree = state.instance.tree
    queue: List[Tuple[int, int, int]] = [
        (wit, d, v) for v in sorted((tree.parent[wit], wit))
    ]
    while queue:
        g, owner, v = queue.pop(0)
        for j in state.decrease_targets(owner, v):
            if g in state.edge_set[j]:
                state.cascade_edge.setdefault((j, v), g)
                continue
            cands = [
                f
                for f in state.edges_at[j].get(v, ())
                if (f, j) in snap.bottleneck
                and (state.far_end(f, v), j) in snap.nonrelax
            ]
            assert cands, "immovable mass must be pinned by a bottleneck edge"
            f = min(cands)
            state.cascade_edge.setdefault((j, v), f)
            if f not in state.F:
                state.F.add(f)
                queue.append((f, j, state.far_end(f, v)))


def increase_iteration(state: IncreaseState, i: int) -> IncreaseState:
    """Process demand i: raise its dual value as far as the capacities
    allow, then add the witness edge (and any chased additions) to F."""
    inst = state.instance
    assert not (state.F & state.edge_set[i]), "demand already covered"
    _minimize_nu(state)
    # generous stall guard: a legitimate run saturates at least one new
    # capacity per step, and there are |E| + |V| of them per demand round
    cap = (len(inst.tree.edge_ids()) + inst.tree.n) * (len(inst.demands) + 1)
    steps = 0
    while True:
        snap = state.snapshot()
        terminal = [
            e
            for e in state.path_edges[i]
            if (e, i) in snap.bottleneck
            and (inst.tree.parent[e], i) in snap.nonrelax
            and (e, i) in snap.nonrelax
        ]
        if terminal:
            break
        H, U, R = _select_cover(state, i, snap)
        moves = _sanction_moves(state, i, R, snap)
        eps = _step_lp(state, i, H, U, R, moves, snap)
        assert eps > 0, "no progress without a terminal bottleneck"
        steps += 1
        assert steps <= cap, (
            f"step budget exhausted for demand {i}: {steps} steps"
        )

    witnesses = [
        e
        for e in terminal
        if all(
            (e, j) in snap.tight
            for j in range(len(inst.demands))
            if e in state.edge_set[j]
        )
    ]
    # an edge can be forced loose for a third demand when that demand's
    # other rows pin its end-node mass higher than its own value; fall
    # back to the terminal edges, which are always pinned for i itself
    wit = min(witnesses or terminal, key=lambda e: (-inst.tree.depth[e], e))
    state.F.add(wit)
    state.witness[i] = wit
    state.processed.append(i)
    _fact5_additions(state, wit, i, snap)
    return state


def relaxable_set(state: IncreaseState, i: int) -> Set[int]:
    """Nodes on demand i's path whose dual mass could still be shifted."""
    snap = state.snapshot()
    return {v for v in state.node_set[i] if (v, i) not in snap.nonrelax}


def run_increase_phase(state: IncreaseState) -> IncreaseState:
    """Iterate until every demand path is covered.  The pinning property
    the deletion phase relies on — a charged node beside a kept edge keeps
    a replacement path edge of its demand — is asserted there, at the
    point of use, because which nodes matter depends on what is kept."""
    while True:
        d = state.uncovered()
        if d is None:
            break
        increase_iteration(state, d)
    state.assert_feasible()
    assert all(d in state.witness for d in state.processed)
    return state


# ---------------------------------------------------------------------------
# deletion phase


def _edge_is_ancestor(tree: RootedTree, g: int, e: int) -> bool:
    upper = tree.parent[e]
    return g == upper or tree.is_node_ancestor(g, upper)


def deletion_phase(state: IncreaseState) -> FrozenSet[int]:
    """Thin F so each demand's dual value is charged to at most two kept
    edges; asserts the structural output conditions."""
    inst = state.instance
    tree = inst.tree
    k = len(inst.demands)
    snap = state.snapshot()
    kept: Set[int] = set()
    assert [state.position[d] for d in state.processed] == sorted(
        state.position[d] for d in state.processed
    )

    def admit(f: int, force: bool) -> bool:
        # After adding f, any other kept edge on a common leg (necessarily
        # an ancestor or descendant of f) is redundant for that leg; drop
        # it unless some demand it cuts would be left without a kept edge.
        # If a processed demand's leg would still hold two edges, adding f
        # is refused — unless it is forced to restore coverage.
        trial = set(kept)
        trial.add(f)
        for other in sorted(trial):
            if other == f:
                continue
            if not (
                _edge_is_ancestor(tree, f, other)
                or _edge_is_ancestor(tree, other, f)
            ):
                continue
            if not any(
                f in leg and other in leg
                for j in range(k)
                for leg in state.legs[j]
            ):
                continue
            rest = trial - {other}
            if all(
                rest & state.edge_set[q]
                for q in range(k)
                if other in state.edge_set[q]
            ):
                trial.discard(other)
        if not force and any(
            len(trial & leg) > 1
            for j in state.processed
            for leg in state.legs[j]
        ):
            return False
        kept.clear()
        kept.update(trial)
        return True

    for d in reversed(state.processed):
        active = [
            v
            for v in state.path_nodes[d]
            if state.mu.get((v, d), ZERO) > 0
            and any(v in (tree.parent[f], f) for f in kept)
        ]
        maximal = [
            v
            for v in active
            if not any(a != v and tree.is_node_ancestor(a, v) for a in active)
        ]
        assert len(maximal) <= 2, f"more than two maximal charged nodes for {d}"
        for v in sorted(maximal):
            cands = [
                f
                for f in state.edges_at[d].get(v, ())
                if f in state.F
                and (f, d) in snap.bottleneck
                and (state.far_end(f, v), d) in snap.nonrelax
            ]
            assert cands, f"no pinned replacement edge at node {v} for {d}"
            # demands still to be handled that hold dual mass here will be
            # served by their own chased edge; aligning on it now avoids
            # stacking two kept edges on one leg later
            future = {
                state.cascade_edge.get((d2, v))
                for d2 in state.processed
                if state.position[d2] < state.position[d]
                and state.mu.get((v, d2), ZERO) > 0
            }
            pool = [f for f in cands if f in future] or cands
            chased = state.cascade_edge.get((d, v))
            if len(pool) >= 2 and v in pool:
                f = v  # the edge whose lower end is v
            elif chased in pool:
                f = chased
            else:
                f = min(pool)
            admit(f, force=False)
        wit = state.witness[d]
        if not any(
            g == wit or _edge_is_ancestor(tree, g, wit)
            for g in kept & state.edge_set[d]
        ):
            admit(wit, force=not (kept & state.edge_set[d]))

    assert kept <= state.F
    for j in range(len(inst.demands)):
        assert kept & state.edge_set[j], f"demand {j} left uncovered"
    for d in state.processed:
        for leg in state.legs[d]:
            assert len(kept & leg) <= 1, f"leg of demand {d} cut twice"
    return frozenset(kept)


# ---------------------------------------------------------------------------
# verification and the public solver


def verify_multicut(
    inst: MulticutInstance, edges, dual: MulticutDual
) -> CheckReport:
    """Certificate check: coverage, exact dual feasibility, the factor-2
    bound, and full saturation of every kept edge and touched node."""
    report = CheckReport()
    tree = inst.tree
    k = len(inst.demands)
    chosen = set(edges)
    paths = [frozenset(inst.path_edges(i)) for i in range(k)]
    node_sets = [frozenset(inst.path_nodes(i)) for i in range(k)]

    uncovered = [i for i in range(k) if not (chosen & paths[i])]
    report.add("demands-separated", not uncovered, f"uncovered: {uncovered}")

    ok_domain = (
        all(0 <= i < k and val >= 0 for i, val in dual.xi.items())
        and all(
            0 <= i < k and e in paths[i] and val >= 0
            for (e, i), val in dual.nu.items()
        )
        and all(
            0 <= i < k and v in node_sets[i] and val >= 0
            for (v, i), val in dual.mu.items()
        )
    )
    feasible = ok_domain
    if ok_domain:
        for i in range(k):
            for e in paths[i]:
                lhs = (
                    dual.nu.get((e, i), ZERO)
                    + dual.mu.get((tree.parent[e], i), ZERO)
                    + dual.mu.get((e, i), ZERO)
                )
                if dual.xi.get(i, ZERO) > lhs:
                    feasible = False
        nu_sum: Dict[int, Rat] = {}
        for (e, _), val in dual.nu.items():
            nu_sum[e] = nu_sum.get(e, ZERO) + val
        mu_sum: Dict[int, Rat] = {}
        for (v, _), val in dual.mu.items():
            mu_sum[v] = mu_sum.get(v, ZERO) + val
        if any(tot > inst.edge_weight[e] for e, tot in nu_sum.items()):
            feasible = False
        if any(tot > inst.node_weight[v] for v, tot in mu_sum.items()):
            feasible = False
    report.add("dual-feasible", feasible)

    cost = sum((inst.edge_weight[e] for e in chosen), ZERO)
    touched = set()
    for e in chosen:
        touched.add(tree.parent[e])
        touched.add(e)
    cost += sum((inst.node_weight[v] for v in touched), ZERO)
    total = dual.total
    report.add(
        "within-twice-dual", cost <= 2 * total, f"cost {cost}, dual total {total}"
    )

    saturated = True
    if ok_domain:
        for e in chosen:
            got = sum((dual.nu.get((e, i), ZERO) for i in range(k)), ZERO)
            if got != inst.edge_weight[e]:
                saturated = False
        for v in touched:
            got = sum((dual.mu.get((v, i), ZERO) for i in range(k)), ZERO)
            if got != inst.node_weight[v]:
                saturated = False
    else:
        saturated = False
    report.add("kept-capacities-saturated", saturated)
    return report


def run_multicut_pipeline(
    inst: MulticutInstance,
) -> Tuple[MulticutInstance, Dict[int, int], IncreaseState, Set[int]]:
    """The full solver state behind :func:`solve_multicut_tree`.

    Returns the penalty-compiled instance, its penalty-edge map, the final
    increase-phase state (dual, witnesses, processing order), and the kept
    cut on the compiled instance — for callers that also emit certificates.
    """
    if not isinstance(inst, MulticutInstance):
        raise InstanceError("the multicut solver needs a multicut tree instance")
    inst0, mapping = reduce_prize_collecting(inst)
    state = IncreaseState(inst0)
    run_increase_phase(state)
    kept = deletion_phase(state)

    report = verify_multicut(inst0, kept, state.dual)
    assert report.passed, "output certificate failed: " + "; ".join(
        report.failures()
    )
    forbidden = big_m_edges(inst0, mapping)
    assert not (kept & forbidden), "a never-cut pendant edge was selected"
    return inst0, mapping, state, kept


def solve_multicut_tree(
    inst: MulticutInstance,
) -> Tuple[Solution, MulticutDual, Rat]:
    """Separate or pay for every demand pair; the returned dual total is a
    lower bound on the optimum and the objective is at most twice it."""
    _, _, state, kept = run_multicut_pipeline(inst)
    dual = state.dual
    original_edges = sorted(e for e in kept if e < inst.tree.n)
    sol = multicut_solution(inst, original_edges)
    total = dual.total
    assert not is_inf(sol.total) and sol.total <= 2 * total
    if total > 0:
        ratio = sol.total / total
    else:
        assert sol.total == 0
        ratio = ONE
    return sol, dual, ratio
