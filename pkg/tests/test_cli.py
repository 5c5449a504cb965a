"""Command-line front end: subcommands, exit codes, and output formats."""

import subprocess
import sys

import pytest

from graphcover import cli, parse_instance


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def star4(tmp_path):
    path = tmp_path / "star4.eds"
    assert cli.run(["gen", "star-gap-eds", "--n", "4", "-o", str(path)]) == 0
    return path


@pytest.fixture
def mtree(tmp_path):
    path = tmp_path / "m.tree"
    args = ["gen", "random-tree-multicut", "--n", "7", "--k", "3", "--seed", "4"]
    assert cli.run(args + ["-o", str(path)]) == 0
    return path


# -- gen ---------------------------------------------------------------------


def test_gen_writes_parseable_file(star4, capsys):
    inst = parse_instance(star4.read_text())
    assert inst.graph.n == 5
    capsys.readouterr()


def test_gen_to_standard_output(capsys):
    code, out, _ = run_cli(capsys, "gen", "star-gap-eds", "--n", "2")
    assert code == 0
    assert out.startswith("problem eds-tree\n")


def test_gen_rejects_bad_params(capsys):
    code, _, err = run_cli(capsys, "gen", "star-gap-eds", "--n", "1")
    assert code == 2
    assert "error:" in err


# -- solve -------------------------------------------------------------------


def test_solve_star(star4, capsys):
    code, out, _ = run_cli(capsys, "solve", str(star4))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "problem eds-tree"
    assert "objective 1" in lines
    assert "dual-total 1" in lines
    assert "ratio 1" in lines


def test_solve_multicut_prints_breakdown(mtree, capsys):
    code, out, _ = run_cli(capsys, "solve", str(mtree))
    assert code == 0
    keys = [line.split()[0] for line in out.splitlines()]
    assert keys[:6] == [
        "problem",
        "objective",
        "edge-weight",
        "node-weight",
        "penalty",
        "edges",
    ]
    assert "dual-total" in keys and "ratio" in keys


def test_solve_general_prints_bound(tmp_path, capsys):
    path = tmp_path / "g.eds"
    cli.run(["gen", "random-eds-general", "--n", "5", "--m", "6", "--seed", "2", "-o", str(path)])
    code, out, _ = run_cli(capsys, "solve", str(path))
    assert code == 0
    keys = [line.split()[0] for line in out.splitlines()]
    assert "lower" in keys and "factor" in keys


def test_solve_refuses_cover_instances(tmp_path, capsys):
    path = tmp_path / "sc.cov"
    cli.run(["gen", "random-set-cover", "--seed", "1", "-o", str(path)])
    code, _, err = run_cli(capsys, "solve", str(path))
    assert code == 2
    assert "oracle" in err  # points at the right subcommand


def test_solve_missing_file(capsys):
    code, _, err = run_cli(capsys, "solve", "/no/such/file")
    assert code == 2
    assert "error:" in err


# -- solve + verify loop -----------------------------------------------------


@pytest.mark.parametrize(
    "genargs",
    [
        ["gen", "star-gap-eds", "--n", "5"],
        ["gen", "random-tree-eds", "--n", "8", "--seed", "11"],
        ["gen", "random-tree-multicut", "--n", "7", "--k", "3", "--seed", "4"],
        ["gen", "subdivided-star-multicut", "--n", "3"],
        ["gen", "random-eds-general", "--n", "5", "--m", "6", "--seed", "7"],
    ],
)
def test_solve_then_verify_own_certificate(tmp_path, capsys, genargs):
    inst = tmp_path / "inst.txt"
    cert = tmp_path / "inst.cert"
    assert cli.run(genargs + ["-o", str(inst)]) == 0
    assert cli.run(["solve", str(inst), "--certificate", str(cert)]) == 0
    code, out, _ = run_cli(capsys, "verify", str(inst), str(cert))
    assert code == 0
    assert out.rstrip().endswith("verdict: PASS")


def test_verify_rejects_tampered_certificate(star4, tmp_path, capsys):
    cert = tmp_path / "star4.cert"
    assert cli.run(["solve", str(star4), "--certificate", str(cert)]) == 0
    text = cert.read_text().replace("xi 1 1", "xi 1 2")
    cert.write_text(text)
    code, out, _ = run_cli(capsys, "verify", str(star4), str(cert))
    assert code == 1
    assert "FAIL" in out


def test_verify_rejects_unparseable_certificate(star4, tmp_path, capsys):
    cert = tmp_path / "broken.cert"
    cert.write_text("certificate eds-tree\nobjective oops\n")
    code, _, err = run_cli(capsys, "verify", str(star4), str(cert))
    assert code == 2
    assert "error:" in err


# -- oracle ------------------------------------------------------------------


def test_oracle_on_cover_instance(tmp_path, capsys):
    path = tmp_path / "sc.cov"
    cli.run(["gen", "random-set-cover", "--seed", "1", "-o", str(path)])
    code, out, _ = run_cli(capsys, "oracle", str(path))
    assert code == 0
    assert out.splitlines()[0] == "problem set-cover"
    assert out.splitlines()[1].startswith("optimum ")


def test_oracle_on_star(star4, capsys):
    code, out, _ = run_cli(capsys, "oracle", str(star4))
    assert code == 0
    assert "optimum 1" in out
    assert "edges 1" in out


# -- gap ---------------------------------------------------------------------


def test_gap_natural(star4, capsys):
    code, out, _ = run_cli(capsys, "gap", str(star4), "--relaxation", "natural")
    assert code == 0
    assert out.strip() == "LP=1/4, OPT=1, gap=4"


def test_gap_strengthened(star4, capsys):
    code, out, _ = run_cli(capsys, "gap", str(star4), "--relaxation", "strengthened")
    assert code == 0
    assert out.strip() == "LP=1, OPT=1, gap=1"


def test_gap_zero_lp_zero_opt(tmp_path, capsys):
    path = tmp_path / "free.eds"
    cli.run(["gen", "random-tree-eds", "--n", "5", "--wmax", "0", "--pmax", "0",
             "--inf_prob", "0", "--seed", "1", "-o", str(path)])
    code, out, _ = run_cli(capsys, "gap", str(path), "--relaxation", "natural")
    assert code == 0
    assert out.strip() == "LP=0, OPT=0, gap=1"


# -- batch -------------------------------------------------------------------


def _build_suite(dirpath):
    cases = [
        ("a_star.eds", ["gen", "star-gap-eds", "--n", "3"]),
        ("b_tree.eds", ["gen", "random-tree-eds", "--n", "7", "--seed", "2"]),
        ("c_cut.tree", ["gen", "random-tree-multicut", "--n", "6", "--k", "2", "--seed", "3"]),
        ("d_gen.eds", ["gen", "random-eds-general", "--n", "5", "--m", "5", "--seed", "5"]),
        ("e_sets.cov", ["gen", "random-set-cover", "--seed", "8"]),
    ]
    for name, args in cases:
        assert cli.run(args + ["-o", str(dirpath / name)]) == 0
    return [name for name, _ in cases]


def test_batch_report(tmp_path, capsys):
    suite = tmp_path / "suite"
    suite.mkdir()
    names = _build_suite(suite)
    report = tmp_path / "report.tsv"
    certs = tmp_path / "certs"
    code = cli.run(["batch", str(suite), "--report", str(report),
                    "--certificates", str(certs)])
    capsys.readouterr()
    assert code == 0
    lines = report.read_text().splitlines()
    assert lines[0] == "instance\tnatural-lp\tstrengthened-lp\tobjective\toptimum\tratio\tverdict"
    assert [row.split("\t")[0] for row in lines[1:]] == names
    for row in lines[1:]:
        cells = row.split("\t")
        assert cells[-1] in ("pass", "-")
        if cells[0] == "e_sets.cov":
            assert cells[1:4] == ["-", "-", "-"]
    made = sorted(p.name for p in certs.iterdir())
    assert made == ["a_star.eds.cert", "b_tree.eds.cert", "c_cut.tree.cert", "d_gen.eds.cert"]


def test_batch_missing_directory(capsys, tmp_path):
    code, _, err = run_cli(capsys, "batch", str(tmp_path / "nope"),
                           "--report", str(tmp_path / "r.tsv"))
    assert code == 2


# -- exit codes and wiring ---------------------------------------------------


def test_unknown_subcommand(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2


def test_no_arguments_is_usage_error(capsys):
    assert run_cli(capsys, )[0] == 2


def test_help_exits_zero(capsys):
    assert run_cli(capsys, "--help")[0] == 0


def test_internal_assertion_maps_to_exit_three(star4, capsys, monkeypatch):
    def boom(inst):
        raise AssertionError("forced for the test")

    monkeypatch.setattr(cli, "_solve", boom)
    code, _, err = run_cli(capsys, "solve", str(star4))
    assert code == 3
    assert "internal check failed" in err


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "graphcover.cli", "gen", "star-gap-eds", "--n", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout.startswith("problem eds-tree")
