"""Exact linear programming on rationals.

A small dense-tableau two-phase simplex.  Everything is computed in exact
rational arithmetic with zero tolerances; a Bland's-rule fallback guarantees
termination, and the fixed variable order makes every solve deterministic.

Infinite data never enters a model: callers eliminate infinities before
building (for example by fixing a variable to zero or omitting a bound).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .rationals import Rat, ZERO, ONE, fmt_rat, is_inf

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpFormatError(ValueError):
    """Raised for structurally malformed models."""


@dataclass
class LinearConstraint:
    name: str
    coeffs: Dict[str, object]  # var name -> Rat
    relation: str  # "<=", ">=" or "=="
    rhs: object  # Rat


@dataclass
class LpResult:
    status: str
    value: Optional[object] = None  # Rat
    assignment: Optional[Dict[str, object]] = None

    def __getitem__(self, var):
        return self.assignment[var]


@dataclass
class LpModel:
    """A named LP: ordered variables, linear constraints, one objective."""

    name: str
    sense: str = "min"
    variables: List[str] = field(default_factory=list)
    nonneg: Dict[str, bool] = field(default_factory=dict)
    objective: Dict[str, object] = field(default_factory=dict)
    constraints: List[LinearConstraint] = field(default_factory=list)

    def add_var(self, name: str, nonneg: bool = True, obj=ZERO) -> str:
        if name in self.nonneg:
            raise LpFormatError(f"duplicate variable {name!r}")
        _check_finite(obj, f"objective coefficient of {name}")
        self.variables.append(name)
        self.nonneg[name] = nonneg
        if obj != 0:
            self.objective[name] = Rat(obj)
        return name

    def add_constraint(self, name: str, coeffs: Dict[str, object], relation: str, rhs) -> None:
        if relation not in ("<=", ">=", "=="):
            raise LpFormatError(f"bad relation {relation!r}")
        _check_finite(rhs, f"rhs of {name}")
        clean = {}
        for var, c in coeffs.items():
            if var not in self.nonneg:
                raise LpFormatError(f"constraint {name!r} references unknown variable {var!r}")
            _check_finite(c, f"coefficient of {var} in {name}")
            if c != 0:
                clean[var] = Rat(c)
        self.constraints.append(LinearConstraint(name, clean, relation, Rat(rhs)))

    def to_text(self) -> str:
        """Plain-text listing, mainly for debugging and logs."""
        lines = [f"lp {self.name}", f"{self.sense} " + _expr_text(self.objective)]
        lines.append("subject to")
        for c in self.constraints:
            lines.append(f"  {c.name}: " + _expr_text(c.coeffs) + f" {c.relation} {fmt_rat(c.rhs)}")
        frees = [v for v in self.variables if not self.nonneg[v]]
        lines.append("variables " + " ".join(self.variables) if self.variables else "variables (none)")
        if frees:
            lines.append("free " + " ".join(frees))
        return "\n".join(lines) + "\n"


def _expr_text(coeffs: Dict[str, object]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for var, c in coeffs.items():
        if c == 1:
            parts.append(var)
        elif c == -1:
            parts.append(f"- {var}" if parts else f"-{var}")
            continue
        else:
            parts.append(f"{fmt_rat(c)} {var}")
    return " + ".join(parts).replace("+ - ", "- ")


def _check_finite(value, what: str) -> None:
    if is_inf(value):
        raise LpFormatError(f"infinite {what}; eliminate infinities before building the model")
    if isinstance(value, float):
        raise LpFormatError(f"float {what}; use exact rationals")


def simplex_solve(model: LpModel) -> LpResult:
    """Solve the model exactly.  Returns status, optimal value and a full
    variable assignment (deterministic for a fixed model)."""
    if model.sense not in ("min", "max"):
        raise LpFormatError(f"bad sense {model.sense!r}")

    # Column layout: one column per nonnegative variable, a (+,-) pair per
    # free variable, then one slack/surplus column per inequality row, then
    # artificial columns.
    col_of: Dict[str, int] = {}
    neg_col_of: Dict[str, int] = {}
    ncols = 0
    for v in model.variables:
        col_of[v] = ncols
        ncols += 1
        if not model.nonneg[v]:
            neg_col_of[v] = ncols
            ncols += 1

    rows: List[List] = []  # coefficient rows, rhs kept separately
    rhs: List = []
    kinds: List[str] = []
    for con in model.constraints:
        row = [ZERO] * ncols
        for var, c in con.coeffs.items():
            row[col_of[var]] = row[col_of[var]] + c
            if var in neg_col_of:
                row[neg_col_of[var]] = row[neg_col_of[var]] - c
        b = con.rhs
        rel = con.relation
        if b < 0:
            row = [-x for x in row]
            b = -b
            rel = {"<=": ">=", ">=": "<=", "==": "=="}[rel]
        if rel == ">=" and b == 0:
            row = [-x for x in row]
            rel = "<="
        rows.append(row)
        rhs.append(b)
        kinds.append(rel)

    m = len(rows)
    # slack / surplus columns
    slack_col = ncols
    for i, rel in enumerate(kinds):
        if rel in ("<=", ">="):
            ncols += 1
    art_start = ncols
    artificial_rows = [i for i, rel in enumerate(kinds) if rel in (">=", "==")]
    ncols += len(artificial_rows)

    tab: List[List] = []
    basis: List[int] = [0] * m
    c = slack_col
    a = art_start
    for i in range(m):
        row = rows[i] + [ZERO] * (ncols - len(rows[i]))
        if kinds[i] == "<=":
            row[c] = ONE
            basis[i] = c
            c += 1
        elif kinds[i] == ">=":
            row[c] = -ONE
            c += 1
            row[a] = ONE
            basis[i] = a
            a += 1
        else:
            row[a] = ONE
            basis[i] = a
            a += 1
        tab.append(row)

    # ---- phase I ----
    if artificial_rows:
        cost = [ZERO] * ncols
        for j in range(art_start, ncols):
            cost[j] = ONE
        for i in range(m):
            if basis[i] >= art_start:
                row = tab[i]
                cost = [cj - rj for cj, rj in zip(cost, row)]
        status = _pivot_until_optimal(tab, rhs, basis, cost, ncols, banned_from=ncols)
        if status == UNBOUNDED:  # cannot happen for a bounded-below phase-I objective
            raise AssertionError("phase I unbounded")
        phase1 = sum((rhs[i] for i in range(m) if basis[i] >= art_start), ZERO)
        if phase1 != 0:
            return LpResult(INFEASIBLE)
        _drive_out_artificials(tab, rhs, basis, art_start)
        # Drop rows that stayed artificial-basic (redundant constraints).
        keep = [i for i in range(m) if basis[i] < art_start]
        tab = [tab[i] for i in keep]
        rhs = [rhs[i] for i in keep]
        basis = [basis[i] for i in keep]
        m = len(keep)

    # ---- phase II ----
    sign = ONE if model.sense == "min" else -ONE
    cost = [ZERO] * ncols
    for var, coef in model.objective.items():
        cost[col_of[var]] = cost[col_of[var]] + sign * coef
        if var in neg_col_of:
            cost[neg_col_of[var]] = cost[neg_col_of[var]] - sign * coef
    for i in range(m):
        f = cost[basis[i]]
        if f != 0:
            row = tab[i]
            cost = [cj - f * rj if rj else cj for cj, rj in zip(cost, row)]
    status = _pivot_until_optimal(tab, rhs, basis, cost, art_start, banned_from=art_start)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)

    assignment = {}
    vals = [ZERO] * ncols
    for i in range(m):
        vals[basis[i]] = rhs[i]
    objective_value = ZERO
    for var in model.variables:
        x = vals[col_of[var]]
        if var in neg_col_of:
            x = x - vals[neg_col_of[var]]
        assignment[var] = x
        coef = model.objective.get(var)
        if coef is not None:
            objective_value = objective_value + coef * x
    return LpResult(OPTIMAL, objective_value, assignment)


def _pivot_until_optimal(tab, rhs, basis, cost, ncols, banned_from) -> str:
    """Minimise the cost row.  Columns >= banned_from never enter.

    Pivots choose the most negative reduced cost (fast in practice) and fall
    back to Bland's least-index rule after a run of degenerate pivots, which
    restores the termination guarantee without giving up determinism.
    """
    m = len(tab)
    width = min(ncols, banned_from)
    stalled = 0
    bland = False
    while True:
        enter = -1
        if bland:
            for j in range(width):
                if cost[j] < 0:
                    enter = j
                    break
        else:
            best = ZERO
            for j in range(width):
                cj = cost[j]
                if cj < best:
                    best = cj
                    enter = j
        if enter < 0:
            return OPTIMAL
        leave = -1
        best_ratio = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tab, rhs, basis, cost, leave, enter)
        if not bland:
            if best_ratio == 0:
                stalled += 1
                if stalled > 40:
                    bland = True
            else:
                stalled = 0


def _pivot(tab, rhs, basis, cost, r, c) -> None:
    prow = tab[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        prow = [x * inv if x else x for x in prow]
        tab[r] = prow
        rhs[r] = rhs[r] * inv
    br = rhs[r]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[c]
        if f:
            tab[i] = [x - f * p if p else x for x, p in zip(row, prow)]
            rhs[i] = rhs[i] - f * br
    f = cost[c]
    if f:
        cost[:] = [x - f * p if p else x for x, p in zip(cost, prow)]
    basis[r] = c


def _drive_out_artificials(tab, rhs, basis, art_start) -> None:
    m = len(tab)
    for i in range(m):
        if basis[i] >= art_start:
            row = tab[i]
            piv_col = next((j for j in range(art_start) if row[j] != 0), None)
            if piv_col is not None:
                dummy_cost = [ZERO] * len(row)
                _pivot(tab, rhs, basis, dummy_cost, i, piv_col)
