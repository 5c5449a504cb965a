"""Certificate round-trip, verification, and tamper detection for all kinds."""

import pytest

from graphcover import (
    INF,
    ParseError,
    Rat,
    eds_general_certificate,
    eds_tree_certificate,
    gen_instance,
    multicut_certificate,
    multicut_solution,
    parse_certificate,
    serialize_certificate,
    solve_eds_general,
    solve_eds_tree,
    solve_multicut_tree,
    verify_certificate,
)
from graphcover.cli import _solve
from graphcover.multicut_tree import run_multicut_pipeline
from graphcover.rationals import ZERO

from _support import star_multicut, two_leaf_star


def _tree_cert(seed=3):
    inst = gen_instance("random-tree-eds", n=7, seed=seed)
    sol, dual = solve_eds_tree(inst)
    return inst, eds_tree_certificate(inst, sol, dual.xi)


def _multicut_cert(seed=4):
    inst = gen_instance("random-tree-multicut", n=7, k=3, seed=seed)
    _, cert = _solve(inst)
    return inst, cert


def _general_cert(seed=2):
    inst = gen_instance("random-eds-general", n=5, m=6, seed=seed)
    sol, lower, factor = solve_eds_general(inst)
    return inst, eds_general_certificate(inst, sol, lower, factor)


# -- round-trips ------------------------------------------------------------


@pytest.mark.parametrize("make", [_tree_cert, _multicut_cert, _general_cert])
def test_serialize_parse_round_trip(make):
    _, cert = make()
    text = serialize_certificate(cert)
    again = parse_certificate(text)
    assert again == cert
    assert serialize_certificate(again) == text


def test_tree_certificate_lists_every_edge_xi():
    inst, cert = _tree_cert()
    assert sorted(cert.xi) == sorted(inst.graph.edge_ids())


def test_multicut_certificate_lists_every_demand_xi():
    inst, cert = _multicut_cert()
    assert sorted(cert.xi) == list(range(len(inst.demands)))


# -- verification accepts solver output --------------------------------------


@pytest.mark.parametrize("make", [_tree_cert, _multicut_cert, _general_cert])
def test_verify_accepts_solver_output(make):
    inst, cert = make()
    report = verify_certificate(inst, parse_certificate(serialize_certificate(cert)))
    assert report.passed, report.format()


# -- tampering is caught -----------------------------------------------------


def test_tampered_tree_dual_rejected():
    inst, cert = _tree_cert()
    edge = min(cert.xi)
    cert.xi[edge] = cert.xi[edge] + 1
    cert.objective = cert.objective + 1  # keep the total consistent on purpose
    report = verify_certificate(inst, cert)
    assert not report.passed


def test_tampered_multicut_cut_rejected():
    inst, cert = _multicut_cert()
    cert.edges = ()
    report = verify_certificate(inst, cert)
    assert not report.passed


def test_tampered_multicut_ratio_rejected():
    inst, cert = _multicut_cert()
    cert.ratio = cert.ratio + 1
    report = verify_certificate(inst, cert)
    assert not report.passed


def test_tampered_general_lower_rejected():
    inst, cert = _general_cert()
    cert.lower = cert.lower + 1
    report = verify_certificate(inst, cert)
    assert not report.passed


def test_kind_mismatch_rejected():
    inst, _ = _tree_cert()
    _, other = _general_cert()
    report = verify_certificate(inst, other)
    assert not report.passed


def test_foreign_edge_rejected():
    inst, cert = _multicut_cert()
    cert.edges = cert.edges + (999,)
    report = verify_certificate(inst, cert)
    assert not report.passed


# -- parser errors -----------------------------------------------------------


def test_parse_needs_header():
    with pytest.raises(ParseError) as err:
        parse_certificate("objective 3\n")
    assert "line 1" in str(err.value)


def test_parse_rejects_duplicates():
    _, cert = _tree_cert()
    text = serialize_certificate(cert)
    dup = text + text.splitlines()[1] + "\n"
    with pytest.raises(ParseError):
        parse_certificate(dup)


def test_parse_rejects_wrong_kind_directive():
    text = "certificate eds-tree\nobjective 1\nratio 1\n"
    with pytest.raises(ParseError):
        parse_certificate(text)


def test_parse_rejects_unknown_directive():
    text = "certificate eds-tree\nobjective 1\nbogus 1\n"
    with pytest.raises(ParseError) as err:
        parse_certificate(text)
    assert "line 3" in str(err.value)
