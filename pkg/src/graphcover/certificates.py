"""Certificate documents: emission, parsing, and verification.

A certificate is a line-based text file in the same style as instance files:
``#`` starts a comment and rationals print as ``p/q`` (integers without the
``/1``).  The first directive names the certificate kind, which must match
the instance it is checked against.

* ``eds-tree``: the chosen edges and one dual value per edge.  Verification
  recomputes the objective, requires the dual total to equal it, and
  completes the per-edge values into a full feasible dual.
* ``multicut-tree``: the kept cut of the penalty-compiled tree plus the full
  sparse dual, witness map, and processing order.  Verification rebuilds the
  compiled tree deterministically and re-checks coverage, exact dual
  feasibility, the factor-2 bound, and saturation.
* ``eds-general``: the chosen edges, objective, relaxation lower bound, and
  target factor.  Verification recomputes the objective, re-solves the
  relaxation, and checks the bound chain ``lower <= objective``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .eds_general import harmonic
from .eds_tree import verify_eds_optimality
from .instances import (
    EdsInstance,
    InstanceError,
    MulticutInstance,
    ParseError,
    eds_solution,
    multicut_solution,
    problem_kind,
)
from .lp import OPTIMAL, simplex_solve
from .multicut_tree import (
    MulticutDual,
    big_m_edges,
    reduce_prize_collecting,
    verify_multicut,
)
from .rationals import ExtRat, ONE, Rat, ZERO, fmt_rat, is_inf, parse_rat
from .relaxations import build_relaxation
from .reporting import CheckReport

CERTIFICATE_KINDS = ("eds-tree", "multicut-tree", "eds-general")


@dataclass
class Certificate:
    """Parsed certificate; unused fields stay empty for a given kind."""

    kind: str
    edges: Tuple[int, ...] = ()
    objective: ExtRat = ZERO
    xi: Dict[int, Rat] = field(default_factory=dict)
    nu: Dict[Tuple[int, int], Rat] = field(default_factory=dict)
    mu: Dict[Tuple[int, int], Rat] = field(default_factory=dict)
    witness: Dict[int, int] = field(default_factory=dict)
    processed: Tuple[int, ...] = ()
    ratio: Optional[Rat] = None
    lower: Optional[Rat] = None
    factor: Optional[Rat] = None


def eds_tree_certificate(inst: EdsInstance, sol, xi: Dict[int, Rat]) -> Certificate:
    return Certificate(
        kind="eds-tree",
        edges=tuple(sorted(sol.edges)),
        objective=sol.total,
        xi={e: xi.get(e, ZERO) for e in sorted(inst.graph.edge_ids())},
    )


def multicut_certificate(
    inst: MulticutInstance, sol, ratio: Rat, kept, dual: MulticutDual,
    witness: Dict[int, int], processed,
) -> Certificate:
    return Certificate(
        kind="multicut-tree",
        edges=tuple(sorted(kept)),
        objective=sol.total,
        ratio=ratio,
        xi={i: dual.xi.get(i, ZERO) for i in range(len(inst.demands))},
        nu={k: v for k, v in dual.nu.items() if v != ZERO},
        mu={k: v for k, v in dual.mu.items() if v != ZERO},
        witness=dict(witness),
        processed=tuple(processed),
    )


def eds_general_certificate(inst: EdsInstance, sol, lower: Rat, factor: Rat) -> Certificate:
    return Certificate(
        kind="eds-general",
        edges=tuple(sorted(sol.edges)),
        objective=sol.total,
        lower=lower,
        factor=factor,
    )


def serialize_certificate(cert: Certificate) -> str:
    """Canonical text form; identical certificates serialize identically."""
    if cert.kind not in CERTIFICATE_KINDS:
        raise InstanceError(f"unknown certificate kind {cert.kind!r}")
    lines = [f"certificate {cert.kind}", f"objective {fmt_rat(cert.objective)}"]
    if cert.kind == "multicut-tree":
        lines.append(f"ratio {fmt_rat(cert.ratio)}")
    if cert.kind == "eds-general":
        lines.append(f"lower {fmt_rat(cert.lower)}")
        lines.append(f"factor {fmt_rat(cert.factor)}")
    for e in sorted(cert.edges):
        lines.append(f"edge {e}")
    for key in sorted(cert.xi):
        lines.append(f"xi {key} {fmt_rat(cert.xi[key])}")
    for e, i in sorted(cert.nu):
        lines.append(f"nu {e} {i} {fmt_rat(cert.nu[(e, i)])}")
    for v, i in sorted(cert.mu):
        lines.append(f"mu {v} {i} {fmt_rat(cert.mu[(v, i)])}")
    for i in sorted(cert.witness):
        lines.append(f"witness {i} {cert.witness[i]}")
    for i in cert.processed:
        lines.append(f"processed {i}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    """Parse a certificate file.  Errors report 1-based line numbers."""
    kind = None
    edges = []
    objective = None
    xi: Dict[int, Rat] = {}
    nu: Dict[Tuple[int, int], Rat] = {}
    mu: Dict[Tuple[int, int], Rat] = {}
    witness: Dict[int, int] = {}
    processed = []
    ratio = lower = factor = None

    def fail(lineno, msg):
        raise ParseError(f"line {lineno}: {msg}")

    def want_int(lineno, tok):
        try:
            return int(tok)
        except ValueError:
            fail(lineno, f"expected an integer, got {tok!r}")

    def want_rat(lineno, tok, allow_inf=False):
        try:
            return parse_rat(tok, allow_inf=allow_inf)
        except ValueError as exc:
            fail(lineno, str(exc))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head, args = toks[0], toks[1:]
        if kind is None:
            if head != "certificate":
                fail(lineno, "the first directive must be 'certificate <kind>'")
            if len(args) != 1 or args[0] not in CERTIFICATE_KINDS:
                fail(lineno, f"unknown certificate kind {' '.join(args)!r}")
            kind = args[0]
            continue
        if head == "certificate":
            fail(lineno, "duplicate 'certificate' line")
        elif head == "objective":
            if len(args) != 1 or objective is not None:
                fail(lineno, "'objective' takes one value, once")
            objective = want_rat(lineno, args[0], allow_inf=True)
        elif head == "ratio":
            if len(args) != 1 or kind != "multicut-tree":
                fail(lineno, "'ratio' takes one value and is multicut-only")
            ratio = want_rat(lineno, args[0])
        elif head == "lower":
            if len(args) != 1 or kind != "eds-general":
                fail(lineno, "'lower' takes one value and is eds-general-only")
            lower = want_rat(lineno, args[0])
        elif head == "factor":
            if len(args) != 1 or kind != "eds-general":
                fail(lineno, "'factor' takes one value and is eds-general-only")
            factor = want_rat(lineno, args[0])
        elif head == "edge":
            if len(args) != 1:
                fail(lineno, "'edge' takes one id")
            edges.append(want_int(lineno, args[0]))
        elif head == "xi":
            if len(args) != 2:
                fail(lineno, "'xi' takes an id and a value")
            key = want_int(lineno, args[0])
            if key in xi:
                fail(lineno, f"duplicate xi entry for {key}")
            xi[key] = want_rat(lineno, args[1])
        elif head == "nu":
            if len(args) != 3 or kind != "multicut-tree":
                fail(lineno, "'nu' takes edge, demand and value (multicut-only)")
            key = (want_int(lineno, args[0]), want_int(lineno, args[1]))
            if key in nu:
                fail(lineno, f"duplicate nu entry for {key}")
            nu[key] = want_rat(lineno, args[2])
        elif head == "mu":
            if len(args) != 3 or kind != "multicut-tree":
                fail(lineno, "'mu' takes node, demand and value (multicut-only)")
            key = (want_int(lineno, args[0]), want_int(lineno, args[1]))
            if key in mu:
                fail(lineno, f"duplicate mu entry for {key}")
            mu[key] = want_rat(lineno, args[2])
        elif head == "witness":
            if len(args) != 2 or kind != "multicut-tree":
                fail(lineno, "'witness' takes demand and edge (multicut-only)")
            i = want_int(lineno, args[0])
            if i in witness:
                fail(lineno, f"duplicate witness for demand {i}")
            witness[i] = want_int(lineno, args[1])
        elif head == "processed":
            if len(args) != 1 or kind != "multicut-tree":
                fail(lineno, "'processed' takes one demand (multicut-only)")
            processed.append(want_int(lineno, args[0]))
        else:
            fail(lineno, f"unknown directive {head!r}")

    if kind is None:
        raise ParseError("line 1: empty certificate file")
    if objective is None:
        raise ParseError("missing 'objective' line")
    if len(set(edges)) != len(edges):
        raise ParseError("duplicate 'edge' lines")
    return Certificate(
        kind=kind,
        edges=tuple(sorted(edges)),
        objective=objective,
        xi=xi,
        nu=nu,
        mu=mu,
        witness=witness,
        processed=tuple(processed),
        ratio=ratio,
        lower=lower,
        factor=factor,
    )


def verify_certificate(inst, cert: Certificate) -> CheckReport:
    """Check a certificate against an instance; one named entry per check."""
    report = CheckReport()
    kind = problem_kind(inst)
    if not report.add(
        "kind-matches", kind == cert.kind, f"instance {kind}, certificate {cert.kind}"
    ):
        return report
    if kind == "eds-tree":
        return _verify_eds_tree(inst, cert, report)
    if kind == "multicut-tree":
        return _verify_multicut_tree(inst, cert, report)
    return _verify_eds_general(inst, cert, report)


def _edges_in_range(report, edge_ids, edges) -> bool:
    known = set(edge_ids)
    stray = sorted(set(edges) - known)
    return report.add("edges-exist", not stray, f"unknown edges: {stray}")


def _verify_eds_tree(inst: EdsInstance, cert: Certificate, report: CheckReport):
    if not _edges_in_range(report, inst.graph.edge_ids(), cert.edges):
        return report
    sol = eds_solution(inst, cert.edges)
    report.add(
        "objective-recomputed",
        sol.total == cert.objective,
        f"stated {fmt_rat(cert.objective)}, recomputed {fmt_rat(sol.total)}",
    )
    sub = verify_eds_optimality(inst, sol, cert.xi)
    report.checks.extend(sub.checks)
    return report


def _verify_multicut_tree(inst: MulticutInstance, cert: Certificate, report: CheckReport):
    inst0, mapping = reduce_prize_collecting(inst)
    if not _edges_in_range(report, inst0.tree.edge_ids(), cert.edges):
        return report
    kept = set(cert.edges)
    report.add(
        "no-pendant-guard-edge",
        not (kept & big_m_edges(inst0, mapping)),
        "the compiled tree's guard edges must never be cut",
    )
    k = len(inst0.demands)
    shape_ok = (
        sorted(cert.xi) == list(range(k))
        and all(0 <= i < k for _, i in cert.nu)
        and all(0 <= i < k for _, i in cert.mu)
        and set(cert.processed) <= set(range(k))
        and len(set(cert.processed)) == len(cert.processed)
        and set(cert.witness) == set(cert.processed)
    )
    if not report.add("dual-shape", shape_ok, "xi per demand; witness per processed"):
        return report
    wit_ok = all(
        cert.witness[i] in inst0.path_edges(i) for i in cert.witness
    )
    report.add("witness-on-path", wit_ok)
    dual = MulticutDual(xi=dict(cert.xi), nu=dict(cert.nu), mu=dict(cert.mu))
    sub = verify_multicut(inst0, kept, dual)
    report.checks.extend(sub.checks)

    original = sorted(e for e in kept if e < inst.tree.n)
    sol = multicut_solution(inst, original)
    report.add(
        "objective-recomputed",
        sol.total == cert.objective,
        f"stated {fmt_rat(cert.objective)}, recomputed {fmt_rat(sol.total)}",
    )
    total = dual.total
    stated = cert.ratio
    if total > 0:
        ratio_ok = stated is not None and not is_inf(sol.total) and stated == sol.total / total
    else:
        ratio_ok = stated == ONE and sol.total == ZERO
    report.add("ratio-recomputed", ratio_ok, f"stated {stated}, dual total {total}")
    return report


def _verify_eds_general(inst: EdsInstance, cert: Certificate, report: CheckReport):
    if not _edges_in_range(report, inst.graph.edge_ids(), cert.edges):
        return report
    sol = eds_solution(inst, cert.edges)
    report.add(
        "objective-recomputed",
        sol.total == cert.objective,
        f"stated {fmt_rat(cert.objective)}, recomputed {fmt_rat(sol.total)}",
    )
    res = simplex_solve(build_relaxation(inst, "strengthened"))
    lower_ok = res.status == OPTIMAL and cert.lower == res.value
    report.add(
        "lower-bound-recomputed",
        lower_ok,
        f"stated {cert.lower}, relaxation {res.value if res.status == OPTIMAL else res.status}",
    )
    report.add(
        "factor-is-4H",
        cert.factor == Rat(4) * harmonic(inst.graph.n),
        f"stated {cert.factor}",
    )
    report.add(
        "weak-duality",
        cert.lower is not None and not is_inf(cert.objective) and cert.lower <= cert.objective,
        "lower bound must not exceed the objective",
    )
    return report
