import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from nullgs.cli import generate_fixture, main, run_scenario
from nullgs.errors import SchemaError

SCEN = Path(__file__).resolve().parents[1] / "scenarios"


@pytest.fixture
def runner():
    return CliRunner()


def load(name):
    return json.loads((SCEN / f"{name}.json").read_text())


def test_flat_scenario_text(runner):
    res = runner.invoke(main, ["run", "--scenario", str(SCEN / "flat6.json")])
    assert res.exit_code == 0, res.output
    assert "conformally flat" in res.output


def test_json_output_is_deterministic(runner, tmp_path):
    outs = []
    for d in ("a", "b"):
        res = runner.invoke(main, ["verdict", "--scenario", str(SCEN / "synthetic_k0.json"),
                                   "--out", str(tmp_path / d)])
        assert res.exit_code == 0, res.output
        outs.append((tmp_path / d / "synthetic_k0.json").read_bytes())
    assert outs[0] == outs[1]


def test_tensor_mode_rejects_derivative_tasks(runner):
    res = runner.invoke(main, ["bianchi", "--scenario", str(SCEN / "bad_tensor_bianchi.json")])
    assert res.exit_code == 2
    assert "SchemaError" in res.output


def test_missing_scenario_file(runner, tmp_path):
    res = runner.invoke(main, ["run", "--scenario", str(tmp_path / "nope.json")])
    assert res.exit_code == 2 and "FileError" in res.output


def test_malformed_scenario(runner, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"id": "x", "mode": "chart"}')
    res = runner.invoke(main, ["run", "--scenario", str(p)])
    assert res.exit_code == 2 and "SchemaError" in res.output


def test_reality_verb(runner):
    res = runner.invoke(main, ["reality", "--signature", "3,3", "--format", "json"])
    assert res.exit_code == 0, res.output
    body = json.loads(res.output)["tasks"]["reality"]
    assert body["allowed_real_indices"] == [1, 3]
    bad = runner.invoke(main, ["reality", "--signature", "3,3", "--r", "2"])
    assert bad.exit_code == 2 and "InvalidRealIndex" in bad.output


def test_gen_then_classify(runner, tmp_path):
    res = runner.invoke(main, ["gen", "--family", "SyntheticWeyl", "--m", "2", "--epsilon", "1",
                               "--k", "3", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    scen = {"id": "gen", "mode": "tensor", "weyl": "weyl.json", "assume_cy": True, "tasks": ["classify"]}
    (tmp_path / "s.json").write_text(json.dumps(scen))
    res = runner.invoke(main, ["classify", "--scenario", str(tmp_path / "s.json"), "--format", "json"])
    assert res.exit_code == 0, res.output
    assert '"level": "3"' in res.output


def test_gen_chart_fixtures():
    files = generate_fixture({"family": "PpWave", "n": 6})
    assert set(files) == {"metric.json", "frame.json"}
    files = generate_fixture({"family": "RandomPolyMetric", "n": 5, "degree": 2, "seed": 3})
    assert "metric.json" in files


def test_run_scenario_in_process():
    rep = run_scenario(load("euclidean_quotient"), SCEN)
    gs = rep["tasks"]["gs"]
    statuses = [s["status"] for s in gs["structures"]]
    assert statuses == ["integrability forced"] * 2


def test_unknown_tolerance_rejected():
    obj = load("flat6")
    obj["tolerances"] = {"bogus": 1.0}
    with pytest.raises(SchemaError):
        run_scenario(obj, SCEN)
