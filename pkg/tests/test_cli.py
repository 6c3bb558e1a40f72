import json
from pathlib import Path

import pytest

from spectral_kmatch.cli import WORKERS_ENV, parse_build, run
from spectral_kmatch.enumerate import enumerate_connected
from spectral_kmatch.extremal import build_extremal_thm12, build_extremal_thm14, threshold_thm12, thm11i_extremal
from spectral_kmatch.graph import GraphInputError, complete, copies, disjoint_union, join
from spectral_kmatch.io import to_graph6
from spectral_kmatch.iso import are_isomorphic
from spectral_kmatch.matching import has_perfect_k_matching
from spectral_kmatch.spectral import spectral_radius

GOLDEN = Path(__file__).parent / "golden"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- build expressions ---------------------------------------------------------------------

def test_build_expressions():
    assert parse_build("K1 v (K5 u 2K1)") == build_extremal_thm12(8, 1)
    assert parse_build("K2 v 4K1") == thm11i_extremal()
    assert parse_build("K1 v (K{7} u K3 u {1}K1)") == build_extremal_thm14(12, 1)
    assert parse_build("K2 ∨ (K3 ∪ K3 ∪ 2K1)") == join(complete(2), disjoint_union(complete(3), complete(3), copies(2, complete(1))))
    # union binds tighter than join, join is associative
    assert are_isomorphic(parse_build("K1 v K1 v K1"), complete(3))


@pytest.mark.parametrize("bad", ["", "K", "K1 v", "(K2", "K2 x K3", "2", "K1)"])
def test_build_expression_errors(bad):
    with pytest.raises(GraphInputError):
        parse_build(bad)


# -- goldens -------------------------------------------------------------------------------

@pytest.mark.parametrize("name,argv,code", [
    ("kmatch_triangle", ["kmatch", "--graph6", "Bw", "--k", "1"], 1),
    ("threshold_8_1", ["threshold", "--theorem", "12", "--n", "8", "--t", "1"], 0),
    ("quotient_8_1", ["quotient", "--build", "K1 v (K5 u 2K1)", "--partition", "0|6,7|1,2,3,4,5"], 0),
    ("extremal_12_1", ["extremal", "--theorem", "14", "--n", "12", "--t", "1", "--k", "3"], 0),
    ("fpm_star", ["fpm", "--build", "K1 v 3K1"], 1),
    ("enumerate_4", ["enumerate", "--n", "4"], 0),
])
def test_golden_outputs(capsys, name, argv, code):
    got_code, out, _ = call(capsys, *argv)
    assert got_code == code
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_kmatch_message():
    # the documented one-liner for the odd-order triangle
    assert (GOLDEN / "kmatch_triangle.txt").read_text() == "no perfect 1-matching; certificate S=∅, slack 1\n"


# -- thin-adapter property -------------------------------------------------------------------

def test_radius_matches_library(capsys):
    code, out, _ = call(capsys, "radius", "--build", "K1 v (K5 u 2K1)", "--json")
    assert code == 0
    assert json.loads(out)["rho"] == spectral_radius(build_extremal_thm12(8, 1))


def test_threshold_json_matches_library(capsys):
    code, out, _ = call(capsys, "threshold", "--theorem", "12", "--n", "8", "--t", "1", "--json")
    d = json.loads(out)
    r = threshold_thm12(8, 1)
    assert d["rho_star"] == r.rho_star and d["poly"] == str(r.poly) and 5.0 < d["rho_star"] < 5.1


def test_threshold_out_of_range_is_usage_error(capsys):
    code, _, err = call(capsys, "threshold", "--theorem", "12", "--n", "6", "--t", "1")
    assert code == 2 and "usage:" in err
    code, out, _ = call(capsys, "threshold", "--theorem", "12", "--n", "6", "--t", "1", "--construction-range")
    assert code == 0


def test_kmatch_json_matches_library(capsys, connected_by_order):
    for g in connected_by_order[5][:10] + connected_by_order[6][:10]:
        code, out, _ = call(capsys, "kmatch", "--graph6", to_graph6(g), "--k", "3", "--json")
        ok, cert = has_perfect_k_matching(g, 3)
        d = json.loads(out)
        assert d["exists"] == ok and code == (0 if ok else 1)
        if not ok:
            assert d["certificate"] == cert.to_json()


def test_edges_input(capsys, tmp_path):
    p = tmp_path / "c4.txt"
    p.write_text("4\n0 1\n1 2\n2 3\n3 0\n")
    code, out, _ = call(capsys, "kmatch", "--edges", str(p), "--k", "1")
    assert code == 0 and out.startswith("perfect 1-matching exists")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        run(["kmatch", "--graph6", "Bw"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        run(["nonsense"])
    assert e.value.code == 2
    code, _, err = call(capsys, "radius", "--graph6", "B")
    assert code == 2 and "usage: spectral-kmatch radius" in err
    code, _, err = call(capsys, "kmatch", "--graph6", "Bw", "--k", "2")
    assert code == 2


def test_every_subcommand_has_json(capsys):
    cases = [
        ["radius", "--graph6", "Bw"],
        ["quotient", "--graph6", "Bw", "--partition", "0,1,2"],
        ["kmatch", "--graph6", "C~", "--k", "1"],
        ["fpm", "--graph6", "Bw"],
        ["extremal", "--theorem", "12", "--n", "8", "--t", "1"],
        ["threshold", "--theorem", "14", "--n", "12", "--t", "1"],
        ["sweep", "--inequalities", "--t-max", "1", "--n-max", "16"],
        ["verify", "--theorem", "11i", "--k", "5"],
    ]
    for argv in cases:
        code, out, _ = call(capsys, *argv, "--json")
        assert code == 0, argv
        json.loads(out)


def test_verify_small_family(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = call(capsys, "verify", "--theorem", "11i", "--k", "3", "--report", str(report))
    assert code == 0
    assert "graphs: 112" in out and "exceptions: 1, counterexamples: 0" in out
    d = json.loads(report.read_text())
    assert d["counts"]["extremal-exception"] == 1 and d["counterexamples"] == []


def test_verify_counterexamples_exit_one(capsys):
    code, out, _ = call(capsys, "verify", "--theorem", "14", "--n", "12", "--t", "1", "--k", "1",
                        "--corpus", "sample", "--count", "200", "--seed", "1", "--threshold-offset", "-0.5")
    assert code == 1 and "counterexamples: 0" not in out


def test_workers_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "3")
    code, out, _ = call(capsys, "verify", "--theorem", "11i", "--k", "3")
    assert code == 0 and '"workers": 3' in out


def test_enumerate_matches_library(capsys):
    code, out, _ = call(capsys, "enumerate", "--n", "5")
    assert out.split() == [to_graph6(g) for g in enumerate_connected(5)]


def test_sweep_table(capsys):
    code, out, _ = call(capsys, "sweep", "--theorem", "12", "--t-max", "1", "--n-max", "10")
    lines = out.strip().split("\n")
    assert lines[0].startswith("n,t,rho_star") and len(lines) == 1 + 4
