"""Exact solver for prize-collecting edge domination on weighted rooted trees.

The solver peels the tree level by level.  Each step identifies a local
structure at maximum depth, charges its cheapest resolution into reduced
weights, and records enough context to later translate a solution of the
reduced instance back.  Alongside the edge set it maintains per-edge dual
values xi whose total exactly equals the objective at every level — an
invariant asserted after each unwinding step — which certifies optimality.

Case tags: "A" handles a deepest leaf edge that still carries a positive
penalty (local star around its upper end u with parent v0); "B" applies
when all deepest leaf edges have zero penalty (local two-level structure
around the grandparent s).  Each case either keeps the graph and zeroes
penalties ("keep"/"trim") or deletes the local leaves ("delete"/"drop").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .instances import EdsInstance, InstanceError, Solution, eds_solution
from .rationals import ExtRat, Rat, ZERO, clamp_nonneg, ext_min, ext_sum, is_inf
from .relaxations import complete_eds_dual
from .reporting import CheckReport


@dataclass(frozen=True)
class EdsDual:
    """Per-edge dual values; their total is a certified lower bound."""

    xi: Dict[int, Rat]

    @property
    def total(self) -> Rat:
        return sum(self.xi.values(), ZERO)


@dataclass
class CaseContext:
    """Everything one reduction step must remember to lift a solution back.

    For case A the center is u and the arms are u's children; for case B
    the center is s and the arms are s's children.  Arm edge ids equal arm
    node ids.  bound1/bound2/bound are the two candidate charges and their
    minimum; caps bound the dual values assigned to the arm edges.
    """

    tag: str  # "A" or "B"
    branch: str  # "keep"/"delete" (A), "trim"/"drop" (B)
    center: int
    parent: Optional[int]  # v0 (A) / u0 (B); None when the center is the root
    parent_edge: Optional[int]  # e0
    arms: List[int]  # arm node ids, ascending
    bound1: Rat
    bound2: ExtRat
    bound: Rat
    i_star: int  # 0 refers to the parent edge, i >= 1 to arms[i-1]
    caps: List[ExtRat]  # dual caps per arm edge
    center_w: Rat  # center node weight at this level
    parent_edge_w: Optional[Rat]  # parent edge weight at this level
    grand_edges: List[int] = field(default_factory=list)  # B: all H_i edges
    best_grand: Dict[int, int] = field(default_factory=dict)  # B: arm index -> h_i
    keep_idx: List[int] = field(default_factory=list)  # B: K as arm indices

    def edge_of(self, idx: int) -> int:
        return self.parent_edge if idx == 0 else self.arms[idx - 1]


class _TreeView:
    """A live sub-tree of the original instance with its own weights.

    Nodes keep their original ids; the edge to a node's parent is
    identified by the child id.  Deletions only ever remove whole
    subtrees, so parent/child/depth relations of surviving nodes are
    those of the original tree.
    """

    __slots__ = ("tree", "alive", "wn", "we", "pen")

    def __init__(self, tree, alive, wn, we, pen):
        self.tree = tree
        self.alive = alive
        self.wn = wn
        self.we = we
        self.pen = pen

    @classmethod
    def from_instance(cls, inst: EdsInstance) -> "_TreeView":
        tree = inst.graph
        return cls(
            tree,
            frozenset(range(tree.n)),
            dict(inst.node_weight),
            dict(inst.edge_weight),
            dict(inst.penalty),
        )

    def edge_ids(self) -> List[int]:
        return sorted(v for v in self.alive if v != self.tree.root)

    def children(self, v: int) -> List[int]:
        return [c for c in self.tree.children[v] if c in self.alive]

    def incident(self, v: int) -> List[int]:
        own = [v] if v != self.tree.root else []
        return sorted(own + self.children(v))

    def max_depth(self) -> int:
        return max(self.tree.depth[v] for v in self.alive)

    def measure(self) -> Tuple[int, int]:
        """(#nodes deeper than one, #deepest leaf edges with positive penalty);
        strictly lexicographically decreasing across reductions."""
        deep = sum(1 for v in self.alive if self.tree.depth[v] > 1)
        maxd = self.max_depth()
        hot = sum(
            1
            for v in self.alive
            if v != self.tree.root
            and self.tree.depth[v] == maxd
            and not self.children(v)
            and self.pen[v] > 0
        )
        return (deep, hot)

    def objective(self, edges) -> ExtRat:
        chosen = set(edges)
        cost = ZERO
        nodes = set()
        covered = set()
        for e in chosen:
            cost += self.we[e]
            u = self.tree.parent[e]
            nodes.add(u)
            nodes.add(e)
            covered.update(self.incident(u))
            covered.update(self.incident(e))
        for v in nodes:
            cost += self.wn[v]
        return cost + ext_sum(
            self.pen[e] for e in self.edge_ids() if e not in covered
        )


# ---------------------------------------------------------------------------
# case identification and reduction


def _deep_hot_edge(view: _TreeView) -> Optional[int]:
    """Deepest leaf edge with positive penalty (lowest id), or None."""
    maxd = view.max_depth()
    cands = [
        v
        for v in view.alive
        if v != view.tree.root
        and view.tree.depth[v] == maxd
        and not view.children(v)
        and view.pen[v] > 0
    ]
    return min(cands) if cands else None


def _reduce_a(view: _TreeView, leaf_edge: int) -> Tuple[CaseContext, _TreeView]:
    tree = view.tree
    u = tree.parent[leaf_edge]
    assert u != tree.root, "the deepest leaf has depth above one"
    v0 = tree.parent[u]
    e0 = u
    arms = view.children(u)
    assert arms and leaf_edge in arms
    for v in arms:
        assert not view.children(v), "arms of the deepest star are leaves"
    wu = view.wn[u]
    cand = [(view.we[e0] + wu + view.wn[v0], 0)]
    cand += [(view.we[v] + wu + view.wn[v], i + 1) for i, v in enumerate(arms)]
    bound1 = min(c for c, _ in cand)
    i_star = min(i for c, i in cand if c == bound1)
    bound2 = ext_sum(view.pen[v] for v in arms)
    bound = ext_min(bound1, bound2)
    branch = "keep" if bound1 > bound2 else "delete"
    ctx = CaseContext(
        tag="A",
        branch=branch,
        center=u,
        parent=v0,
        parent_edge=e0,
        arms=list(arms),
        bound1=bound1,
        bound2=bound2,
        bound=bound,
        i_star=i_star,
        caps=[view.pen[v] for v in arms],
        center_w=wu,
        parent_edge_w=view.we[e0],
    )

    wn, we, pen = dict(view.wn), dict(view.we), dict(view.pen)
    shift_edge = clamp_nonneg(bound - wu)
    if branch == "keep":
        alive = view.alive
        for v in arms:
            we[v] = clamp_nonneg(view.we[v] - shift_edge)
            wn[v] = view.wn[v] - clamp_nonneg(bound - wu - view.we[v])
            pen[v] = ZERO
    else:
        alive = view.alive - set(arms)
        for v in arms:
            del wn[v], we[v], pen[v]
        pen[e0] = ZERO
    we[e0] = clamp_nonneg(view.we[e0] - shift_edge)
    wn[v0] = view.wn[v0] - clamp_nonneg(bound - wu - view.we[e0])
    wn[u] = clamp_nonneg(wu - bound)
    out = _TreeView(tree, alive, wn, we, pen)
    assert all(w >= 0 for w in wn.values()) and all(w >= 0 for w in we.values())
    return ctx, out


def _reduce_b(view: _TreeView) -> Tuple[CaseContext, _TreeView]:
    tree = view.tree
    maxd = view.max_depth()
    leaf = min(v for v in view.alive if tree.depth[v] == maxd)
    s = tree.parent[tree.parent[leaf]]
    u0 = tree.parent[s] if s != tree.root else None
    e0 = s if u0 is not None else None
    arms = view.children(s)
    assert arms
    grand = {ui: view.children(ui) for ui in arms}
    for ui in arms:
        for v in grand[ui]:
            assert not view.children(v), "grandchildren of s are leaves"
    ws = view.wn[s]
    cand = []
    if e0 is not None:
        cand.append((view.we[e0] + view.wn[u0] + ws, 0))
    cand += [(view.we[ui] + view.wn[ui] + ws, i + 1) for i, ui in enumerate(arms)]
    bound1 = min(c for c, _ in cand)
    i_star = min(i for c, i in cand if c == bound1)
    caps: List[ExtRat] = []
    best_grand: Dict[int, int] = {}
    keep_idx: List[int] = []
    for i, ui in enumerate(arms):
        if grand[ui]:
            hv, hid = min((view.we[h] + view.wn[h], h) for h in grand[ui])
            best_grand[i + 1] = hid
            inner = view.wn[ui] + hv
            caps.append(ext_min(inner, view.pen[ui]))
            if inner <= view.pen[ui]:
                keep_idx.append(i + 1)
        else:
            caps.append(view.pen[ui])
    bound2 = ext_sum(caps)
    bound = ext_min(bound1, bound2)
    branch = "trim" if bound1 >= bound2 else "drop"
    ctx = CaseContext(
        tag="B",
        branch=branch,
        center=s,
        parent=u0,
        parent_edge=e0,
        arms=list(arms),
        bound1=bound1,
        bound2=bound2,
        bound=bound,
        i_star=i_star,
        caps=caps,
        center_w=ws,
        parent_edge_w=view.we[e0] if e0 is not None else None,
        grand_edges=sorted(h for ui in arms for h in grand[ui]),
        best_grand=best_grand,
        keep_idx=keep_idx,
    )

    wn, we, pen = dict(view.wn), dict(view.we), dict(view.pen)
    if branch == "trim":
        removed = {v for ui in arms for v in grand[ui]}
        for ui in arms:
            pen[ui] = ZERO
        survivors = list(range(len(arms) + 1)) if e0 is not None else list(
            range(1, len(arms) + 1)
        )
    else:
        removed = set(arms) | {v for ui in arms for v in grand[ui]}
        if e0 is not None:
            pen[e0] = ZERO
        survivors = [0] if e0 is not None else []
    for v in removed:
        del wn[v], we[v], pen[v]
    shift_edge = clamp_nonneg(bound - ws)
    for i in survivors:
        if i == 0:
            edge, node = e0, u0
        else:
            edge = node = arms[i - 1]
        we[edge] = clamp_nonneg(view.we[edge] - shift_edge)
        wn[node] = view.wn[node] - clamp_nonneg(bound - ws - view.we[edge])
    wn[s] = clamp_nonneg(ws - bound)
    out = _TreeView(tree, view.alive - removed, wn, we, pen)
    assert all(w >= 0 for w in wn.values()) and all(w >= 0 for w in we.values())
    return ctx, out


# ---------------------------------------------------------------------------
# lifting


def _greedy_fill(caps: List[ExtRat], target: Rat) -> List[Rat]:
    """Values below the caps summing to the target, filled front to back."""
    out = []
    remaining = target
    for cap in caps:
        take = ext_min(cap, remaining)
        out.append(take)
        remaining = remaining - take
    assert remaining == 0, "caps cannot absorb the required dual total"
    return out


def _lift_a(
    ctx: CaseContext, post: _TreeView, F: set, xi: Dict[int, Rat]
) -> Tuple[set, Dict[int, Rat]]:
    F = set(F)
    xi = dict(xi)
    u, v0, e0 = ctx.center, ctx.parent, ctx.parent_edge
    star = set(post.incident(u)) | {e0} | set(ctx.arms)
    for a in sorted(ctx.arms, reverse=True):
        if len(F & star) <= 1:
            break
        if a in F:
            F.remove(a)
    assert len(F & star) <= 1

    if F & set(post.incident(v0)) and ctx.bound > ctx.center_w + ctx.parent_edge_w:
        F.add(e0)
    elif F & set(post.incident(u)):
        # The center is already touched, so the arms are already dominated;
        # the weight restored on the touching edge absorbs the whole charge,
        # and adding anything would overshoot the dual total.
        pass
    elif ctx.branch == "keep":
        pass
    else:
        F.add(ctx.edge_of(ctx.i_star))

    if ctx.branch == "keep":
        for a, cap in zip(ctx.arms, ctx.caps):
            assert xi.get(a, ZERO) == 0 and not is_inf(cap)
            xi[a] = cap
    else:
        assert xi.get(e0, ZERO) == 0
        for a, val in zip(ctx.arms, _greedy_fill(ctx.caps, ctx.bound1)):
            assert a not in xi
            xi[a] = val
    return F, xi


def _lift_b(
    ctx: CaseContext, post: _TreeView, F: set, xi: Dict[int, Rat]
) -> Tuple[set, Dict[int, Rat]]:
    F = set(F)
    xi = dict(xi)
    s, u0, e0 = ctx.center, ctx.parent, ctx.parent_edge
    if e0 is not None:
        near = set(post.incident(u0)) | set(post.incident(s))
        for a in sorted(ctx.arms, reverse=True) + [e0]:
            if len(F & near) <= 1:
                break
            if a in F:
                F.remove(a)

    first = (
        e0 is not None
        and bool(F & set(post.incident(u0)))
        and ctx.bound > ctx.center_w + ctx.parent_edge_w
    )
    if first:
        F.add(e0)
    elif F & set(post.incident(s)):
        pass
    elif ctx.branch == "trim":
        for i in ctx.keep_idx:
            F.add(ctx.best_grand[i])
    else:
        F.add(ctx.edge_of(ctx.i_star))

    if ctx.branch == "trim":
        for a in ctx.arms:
            assert xi.get(a, ZERO) == 0
    elif e0 is not None:
        assert xi.get(e0, ZERO) == 0
    for a, val in zip(ctx.arms, _greedy_fill(ctx.caps, ctx.bound)):
        xi[a] = val
    for h in ctx.grand_edges:
        assert h not in xi
        xi[h] = ZERO
    return F, xi


# ---------------------------------------------------------------------------
# base case and driver


def _base_star(view: _TreeView) -> Tuple[FrozenSet[int], Dict[int, Rat]]:
    assert view.max_depth() <= 1
    edges = view.edge_ids()
    if not edges:
        return frozenset(), {}
    r = view.tree.root
    cand = [(view.we[v] + view.wn[r] + view.wn[v], v) for v in edges]
    alpha1 = min(c for c, _ in cand)
    e_star = min(v for c, v in cand if c == alpha1)
    alpha2 = ext_sum(view.pen[v] for v in edges)
    if alpha1 >= alpha2:
        return frozenset(), {e: view.pen[e] for e in edges}
    fill = _greedy_fill([view.pen[e] for e in edges], alpha1)
    return frozenset({e_star}), dict(zip(edges, fill))


def _assert_level(view: _TreeView, F, xi: Dict[int, Rat]) -> None:
    assert set(xi) == set(view.edge_ids())
    assert all(v >= 0 and v <= view.pen[e] for e, v in xi.items())
    obj = view.objective(F)
    total = sum(xi.values(), ZERO)
    assert not is_inf(obj) and obj == total, f"objective {obj} != dual total {total}"


def solve_eds_tree_trace(
    inst: EdsInstance,
) -> Tuple[Solution, EdsDual, List[CaseContext]]:
    """Like solve_eds_tree but also returns the per-step case contexts."""
    if not isinstance(inst, EdsInstance) or not inst.is_tree:
        raise InstanceError("the exact solver needs a rooted-tree instance")
    view = _TreeView.from_instance(inst)
    views = [view]
    ctxs: List[CaseContext] = []
    measure = view.measure()
    while view.max_depth() > 1:
        hot = _deep_hot_edge(view)
        if hot is not None:
            ctx, view = _reduce_a(view, hot)
        else:
            ctx, view = _reduce_b(view)
        new_measure = view.measure()
        assert new_measure < measure, "reduction measure must strictly decrease"
        measure = new_measure
        views.append(view)
        ctxs.append(ctx)

    F, xi = _base_star(view)
    _assert_level(view, F, xi)
    F = set(F)
    for level in range(len(ctxs) - 1, -1, -1):
        ctx, pre, post = ctxs[level], views[level], views[level + 1]
        if ctx.tag == "A":
            F, xi = _lift_a(ctx, post, F, xi)
        else:
            F, xi = _lift_b(ctx, post, F, xi)
        _assert_level(pre, F, xi)

    sol = eds_solution(inst, sorted(F))
    dual = EdsDual({e: xi[e] for e in sorted(xi)})
    assert sol.total == dual.total
    return sol, dual, ctxs


def solve_eds_tree(inst: EdsInstance) -> Tuple[Solution, EdsDual]:
    """Optimal edge set and a matching dual certificate (total equals the
    objective exactly)."""
    sol, dual, _ = solve_eds_tree_trace(inst)
    return sol, dual


def base_case(inst: EdsInstance) -> Tuple[FrozenSet[int], Dict[int, Rat]]:
    """Solve a depth-one (star) instance directly."""
    if not isinstance(inst, EdsInstance) or not inst.is_tree:
        raise InstanceError("base case needs a rooted-tree instance")
    view = _TreeView.from_instance(inst)
    if view.max_depth() > 1:
        raise InstanceError("base case applies only to depth-one trees")
    return _base_star(view)


def case_a_reduce_and_lift(inst: EdsInstance) -> Tuple[Solution, EdsDual]:
    """Solve an instance whose first reduction is the positive-penalty
    deep-leaf case; errors when that case does not apply."""
    view = _TreeView.from_instance(inst)
    if view.max_depth() <= 1 or _deep_hot_edge(view) is None:
        raise InstanceError("the positive-penalty deep-leaf case does not apply")
    return solve_eds_tree(inst)


def case_b_reduce_and_lift(inst: EdsInstance) -> Tuple[Solution, EdsDual]:
    """Solve an instance whose first reduction is the zero-penalty
    deep-leaf case; errors when that case does not apply."""
    view = _TreeView.from_instance(inst)
    if view.max_depth() <= 1 or _deep_hot_edge(view) is not None:
        raise InstanceError("the zero-penalty deep-leaf case does not apply")
    return solve_eds_tree(inst)


def verify_eds_optimality(inst: EdsInstance, sol: Solution, xi: Dict[int, Rat]) -> CheckReport:
    """Certificate check: dual total equals the recomputed objective, dual
    values sit inside [0, penalty], and a full dual completion exists."""
    report = CheckReport()
    edges = sorted(inst.graph.edge_ids())
    recomputed = eds_solution(inst, sol.edges)
    total = sum(xi.values(), ZERO) if xi else ZERO
    report.add(
        "dual-total-equals-objective",
        set(xi) == set(edges)
        and not is_inf(recomputed.total)
        and total == recomputed.total,
        f"dual total {total}, objective {recomputed.total}",
    )
    in_range = set(xi) == set(edges) and all(
        xi[e] >= 0 and xi[e] <= inst.penalty[e] for e in edges
    )
    report.add("dual-values-within-penalties", in_range)
    if in_range:
        completion = complete_eds_dual(inst, xi)
        report.add("dual-completion-feasible", completion is not None)
    else:
        report.add("dual-completion-feasible", False, "skipped: dual out of range")
    return report
