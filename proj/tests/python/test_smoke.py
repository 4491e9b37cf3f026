import json
import os
from pathlib import Path

import pytest

import moyal_rg as m

CORPUS = Path(os.environ.get("MRG_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))


def graph(name):
    return m.Graph.load(CORPUS / name)


def test_fig2_topology():
    t = graph("fig2.graph").topology()
    assert (t["v"], t["e"], t["f"], t["g"], t["b"]) == (3, 3, 2, 0, 2)


def test_classify_node():
    assert m.classify_node(2, N_kappa=2)["omega"] == 0
    assert m.classify_node(2, broken_faces=2)["counterterm"] == "kappa^2"
    assert m.classify_node(4)["counterterm"] == "lambda"
    assert m.omega_kappa0(2, 0, 1) == -2


def test_errors_carry_their_kind():
    with pytest.raises(m.Error) as e:
        m.classify_node(3)
    assert e.value.args[0] == "InconsistentNode"
    with pytest.raises(m.Error):
        m.Graph.parse('{"vertices": [], "edges": [], "externals": []}')


def test_classify_graph():
    nodes = m.classify(graph("tadpole_planar.graph"))
    assert nodes[-1]["omega"] == -2
    assert nodes[-1]["counterterm"] == "mass/wave/Omega"


def test_slices_and_bound():
    p = m.ModelParams()
    assert m.propagator_slice(p, 1, (0, 0), (0, 0), (0, 0)) > 0
    r = m.verify_slice_bound()
    assert r["variation"] <= 0.2
    with pytest.raises(m.Error) as e:
        m.verify_slice_bound(constants="unit")
    assert e.value.args[0] == "UnboundedRatio"


def test_oracle_and_scan():
    assert m.oracle_check(graph("fig2.graph"), trials=10)["passed"]
    a = m.scaling_scan(graph("tadpole_planar.graph"), samples=20000)
    b = m.scaling_scan(graph("tadpole_planar.graph"), samples=20000)
    assert len(a["rows"]) == 6
    assert a == b


def test_cli_in_process():
    code, out, _ = m.run_cli(["analyze", str(CORPUS / "fig2.graph"), "--format", "json"])
    assert code == 0
    assert json.loads(out)["chi"] == 2
    assert m.run_cli(["bogus"])[0] == 2
