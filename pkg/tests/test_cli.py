import json

import pytest

from conftest import FIXTURES, fixture_graph
from structrobust.cli import main
from structrobust.graph import load_graph


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fx(name):
    return FIXTURES / f"{name}.json"


def test_analyze_fig1(capsys):
    code, out, _ = run(capsys, "analyze", fx("fig1"))
    assert code == 2
    assert "structural rank: 2" in out
    assert "deficiency: 1" in out
    assert "forward minimax bottleneck: bottle {1, 2} neck {3} m=1" in out


def test_analyze_fig1_json(capsys):
    code, out, _ = run(capsys, "analyze", fx("fig1"), "--json")
    doc = json.loads(out)
    assert code == 2
    assert doc["structural_rank"] == 2 and doc["deficiency"] == 1 and not doc["coverable"]
    assert doc["forward_bottleneck"] == {"bottle": ["1", "2"], "neck": ["3"], "deficiency": 1}


def test_analyze_fig2(capsys):
    code, out, _ = run(capsys, "analyze", fx("fig2"), "--json")
    assert code == 0
    assert json.loads(out)["coverable"] is True


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", tmp_path / "nope.json")
    assert code == 1 and err.startswith("error:")


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": ["1"], "edges": [["1", "2"]]}')
    code, _, err = run(capsys, "cover", bad)
    assert code == 1 and "unknown node" in err


def test_cover(capsys):
    code, out, _ = run(capsys, "cover", fx("fig2"))
    assert code == 0
    cycles = [line.split(" -> ") for line in out.splitlines()]
    assert sorted(x for c in cycles for x in c) == ["1", "2", "3", "4"]
    code, out, _ = run(capsys, "cover", fx("fig1"))
    assert code == 2 and out == "none\n"
    code, out, _ = run(capsys, "cover", fx("fig5a"), "--json")
    assert json.loads(out) == {"cover": [["1"]]}


def test_repair_all_example2(capsys):
    code, out, _ = run(capsys, "repair", fx("example2"), "--all", "--json")
    assert code == 0
    assert len(json.loads(out)["fixes"]) == 9


def test_repair_fig6a(capsys):
    code, out, _ = run(capsys, "repair", fx("fig6a"), "--json")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["additions"]) == 6 and doc["trace"] == [6, 5, 4, 3, 2, 1, 0]


def test_repair_fig2_empty(capsys):
    code, out, _ = run(capsys, "repair", fx("fig2"))
    assert code == 0 and out == "deficiency 0\n"
    code, out, _ = run(capsys, "repair", fx("fig2"), "--all")
    assert code == 0 and out == ""


@pytest.mark.parametrize("name", ["fig1", "fig2", "example2"])
def test_verify(capsys, name):
    code, out, _ = run(capsys, "verify", fx(name), "--seed", 42, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    checks = {c["check"]: c for c in doc["checks"]}
    if name == "fig1":
        assert checks["rank_agreement"]["numeric"] == 2
        assert (checks["jacobian_rank_sweep"]["min_rank"], checks["jacobian_rank_sweep"]["max_rank"]) == (2, 2)
        assert checks["robustness_probe"]["verdict"] == "FragileObserved"
    elif name == "fig2":
        assert checks["rank_agreement"]["numeric"] == 4
        assert checks["robustness_probe"]["verdict"] == "RobustObserved"
    else:
        assert checks["null_node_agreement"]["combinatorial"] == ["1", "2", "3"]
        assert checks["null_node_agreement"]["numeric"] == ["1", "2", "3"]


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", fx("fig1"), "--seed", 42, "--points", 5)
    assert code == 0
    assert out.splitlines()[-1] == "all checks passed"
    assert "PASS rank_agreement" in out


def test_render_to_file(capsys, tmp_path):
    dest = tmp_path / "out.dot"
    code, out, _ = run(capsys, "render", fx("fig1"), "-o", dest)
    assert code == 0 and out == ""
    dot = dest.read_text()
    assert dot.startswith('digraph "G" {')
    assert '"1" [style=filled, fillcolor=blue];' in dot
    assert '"2" [style=filled, fillcolor=blue];' in dot
    assert '"3" [style=filled, fillcolor=red];' in dot


def test_render_fig2_and_fig7b(capsys):
    _, out, _ = run(capsys, "render", fx("fig2"))
    assert "fillcolor" not in out
    _, out, _ = run(capsys, "render", fx("fig7b"))
    assert '"5" [style=filled, fillcolor=red];' in out
    assert '"1" [style=filled, fillcolor=blue];' in out
    assert '"3";' in out


def test_render_violet_when_bottle_meets_neck(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text('{"nodes": ["a", "b", "c"], "edges": [["a", "a"], ["b", "a"], ["c", "a"]]}')
    _, out, _ = run(capsys, "render", g)
    assert '"a" [style=filled, fillcolor=violet];' in out


@pytest.mark.parametrize(
    "name, code, verdict",
    [
        ("linear_overdetermined", 2, "AlmostNever"),
        ("linear_single", 0, "AlmostAlways"),
        ("linear_homogeneous", 0, "AlmostAlways"),
    ],
)
def test_solvable(capsys, name, code, verdict):
    got, out, _ = run(capsys, "solvable", fx(name), "--json")
    assert got == code and json.loads(out)["verdict"] == verdict


def test_solvable_bad_document(capsys, tmp_path):
    bad = tmp_path / "sys.json"
    bad.write_text('{"m": 1, "n": 1, "a_pattern": [[0, 0]], "b_pattern": [3]}')
    code, _, err = run(capsys, "solvable", bad)
    assert code == 1 and "b_pattern" in err


def test_expand(capsys, tmp_path):
    dest = tmp_path / "b.json"
    code, _, _ = run(
        capsys, "expand", fx("fig7a"), "--support", "1,2", "--targets", "3,4", "--label", "5",
        "-o", dest,
    )
    assert code == 0
    assert load_graph(dest) == fixture_graph("fig7b")


def test_expand_bad_label(capsys):
    code, _, err = run(
        capsys, "expand", fx("fig7a"), "--support", "1,2", "--targets", "3", "--label", "3"
    )
    assert code == 1 and err.startswith("error:")


def test_seed_changes_nothing_structural(capsys):
    _, a, _ = run(capsys, "analyze", fx("fig6a"), "--json", "--seed", 1)
    _, b, _ = run(capsys, "analyze", fx("fig6a"), "--json", "--seed", 2**63)
    da, db = json.loads(a), json.loads(b)
    assert da["forward_bottleneck"] == db["forward_bottleneck"]
    assert da["numeric_rank"]["rank"] == db["numeric_rank"]["rank"] == 20


def test_usage_error_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0
