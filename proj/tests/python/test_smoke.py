import json
import math

import numpy as np
import pytest

import curvegraph as cg


def test_cycle_spectrum_and_curvature():
    g = cg.generate("cycle", n=12, measure="constant:2")
    assert len(g) == 12
    evals, efuncs = cg.spectrum(g)
    assert evals[0] == pytest.approx(0.0, abs=1e-12)
    assert evals[1] == pytest.approx(1 - math.cos(math.pi / 6))
    gram = efuncs.T @ np.diag(g.measures) @ efuncs
    assert np.allclose(gram, np.eye(12), atol=1e-10)
    holds, failing = cg.cd_check(g, 0.0)
    assert holds and failing == []
    assert min(cg.curvature_profile(g)) >= -1e-12


def test_dumbbell_bridge_is_negatively_curved():
    g = cg.generate("dumbbell", n=4, measure="degree")
    holds, failing = cg.cd_check(g, 0.0)
    assert not holds
    assert failing == [3, 4]
    assert cg.curvature(g, 3) < 0 < cg.curvature(g, 0)


def test_multiway_and_cheeger():
    g = cg.generate("cycle", n=8)
    r = cg.multiway(g, 3)
    assert r["value"] == pytest.approx(1.0)
    assert len(r["witness"]) == 3
    assert cg.cheeger(g)["value"] == pytest.approx(cg.multiway(g, 2)["value"])
    with pytest.raises(cg.CurvegraphError):
        cg.multiway(g, 9)


def test_heat_conserves_mass():
    g = cg.generate("hypercube", d=3)
    f = np.linspace(-1, 1, 8)
    pf = cg.heat(g, f, 0.7)
    assert pf.sum() == pytest.approx(f.sum())
    with pytest.raises(cg.CurvegraphError):
        cg.heat(g, f, -1.0)


def test_json_round_trip_and_product():
    k4 = cg.generate("complete", n=4)
    k2 = cg.generate("complete", n=2)
    p = cg.product(k4, k2)
    m = cg.generate("mimura", n=4)
    assert sorted(p.edges) == sorted(m.edges)
    text = m.to_json()
    assert cg.from_json(text).to_json() == text
    assert json.loads(text)["schema"] == "curvegraph/1"


def test_build_graph_validation():
    g = cg.build_graph(3, [(0, 1, 1.0), (1, 2, 2.0)], measure=[1.0, 2.0, 3.0])
    assert list(g.measures) == [1.0, 2.0, 3.0]
    with pytest.raises(cg.CurvegraphError):
        cg.build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])


def test_verify_report():
    r = cg.verify(cg.generate("cycle", n=10), k_max=3)
    assert r["summary"]["fail"] == 0
    names = {e["name"] for e in r["entries"]}
    assert {"buser", "improved_cheeger", "diameter"} <= names


def test_cli_in_process():
    code, out, err = cg.run_cli(["generate", "complete", "--n", "3"])
    assert code == 0 and err == ""
    assert len(json.loads(out)["vertices"]) == 3
    assert cg.run_cli(["spectrum", "/nonexistent.json"])[0] == 2
