import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from jaccard_rg import tolerances
from jaccard_rg.cli import main
from jaccard_rg.edgelist import parse_edge_list


def schema(name):
    text = resources.files("jaccard_rg").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc, name):
    jsonschema.Draft202012Validator(schema(name)).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid_documents():
    for name in ("gof_report", "graph_summary", "manifest", "moments", "pair_stats", "regime", "sample"):
        jsonschema.Draft202012Validator.check_schema(schema(name))


def test_sample_extremes(capsys):
    code, out, _ = run(capsys, "sample", "--n", "5", "--p", "1", "--seed", "3")
    assert code == 0
    g = parse_edge_list(out)
    assert g.n == 5 and g.edge_count() == 10
    code, out, _ = run(capsys, "sample", "--n", "5", "--p", "0", "--seed", "3")
    g = parse_edge_list(out)
    assert g.n == 5 and g.edge_count() == 0


def test_sample_same_seed_same_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert run(capsys, "sample", "--n", "40", "--p", "0.2", "--seed", "9", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    manifest = json.loads((tmp_path / "a.txt.manifest.json").read_text())
    validate(manifest, "manifest")
    assert manifest["seed"] == 9 and manifest["command"] == "sample"


def test_missing_seed_is_usage_error(capsys):
    code, out, err = run(capsys, "sample", "--n", "5", "--p", "0.5")
    assert code == 2 and out == ""
    assert err.startswith("E_USAGE:") and len(err.strip().splitlines()) == 1


def test_entropy_seed_is_recorded(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert run(capsys, "sample", "--n", "12", "--p", "0.5", "--entropy", "--out", str(out))[0] == 0
    manifest = json.loads((tmp_path / "g.txt.manifest.json").read_text())
    replay = tmp_path / "r.txt"
    assert run(capsys, "replay", str(tmp_path / "g.txt.manifest.json"), "--out", str(replay))[0] == 0
    assert replay.read_bytes() == out.read_bytes()
    assert isinstance(manifest["seed"], int)


def test_bad_parameter_codes(capsys):
    code, _, err = run(capsys, "moments", "--n", "2", "--p", "0.5")
    assert code == 2 and err.startswith("E_PARAM:")
    code, _, err = run(capsys, "regime", "pow:1")
    assert code == 2 and err.startswith("E_PARAM:")
    code, _, err = run(capsys, "gof", "--mode", "average", "--n", "5000", "--p", "0.3", "--trials", "2", "--seed", "1")
    assert code == 2 and err.startswith("E_CAPACITY:")
    code, _, err = run(capsys, "pairstats", "--graph", "/nonexistent/file", "--p", "0.5")
    assert code == 3 and err.startswith("E_IO:")


@pytest.mark.parametrize(
    "spec,regime,extra",
    [
        ("const:0.3", "PairNormal", {"avg_clt_applies": True}),
        ("pow:2:0.5", "PairPoisson", {"lambda": 4.0}),
        ("pow:1:0.8", "PairZero", {}),
        ("dense:1.5:1", "DensePoisson", {"c": 1.5}),
    ],
)
def test_regime(capsys, spec, regime, extra):
    code, out, _ = run(capsys, "regime", spec)
    doc = json.loads(out)
    validate(doc, "regime")
    assert code == 0 and doc["pair_regime"] == regime
    for k, v in extra.items():
        assert doc[k] == v


def test_moments_json_and_csv(capsys):
    code, out, _ = run(capsys, "moments", "--n", "1000", "--p", "0.5")
    doc = json.loads(out)
    validate(doc, "moments")
    assert doc["mean"] == pytest.approx(1 / 3, rel=1e-15)
    assert doc["var_asymptotic"] == pytest.approx(2.963e-4, rel=1e-3)
    doc = json.loads(run(capsys, "moments", "--n", "3", "--p", "0.5")[1])
    assert doc["var_exact"] == pytest.approx(1 / 6, rel=1e-14)
    doc = json.loads(run(capsys, "moments", "--n", "20", "--p", "1")[1])
    assert doc["mean"] == 1 and doc["var_exact"] == 0 and doc["degenerate"] is True
    _, out, _ = run(capsys, "moments", "--n", "1000", "--p", "0.5", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header == "n,p,mean,var_exact,var_asymptotic,relative_gap,degenerate"
    assert row.startswith("1000,0.5,0.33333333333333331,")


def test_pairstats_outputs(tmp_path, capsys):
    graph = tmp_path / "k4.txt"
    graph.write_text("# n=4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
    doc = json.loads(run(capsys, "pairstats", "--graph", str(graph), "--p", "0.5", "--pair", "1", "2")[1])
    validate(doc, "pair_stats")
    assert (doc["s"], doc["t"], doc["j_value"]) == (2, 2, 1.0)
    doc = json.loads(run(capsys, "pairstats", "--graph", str(graph), "--p", "0.5")[1])
    validate(doc, "graph_summary")
    assert doc["j_avg"] == 1.0 and doc["paths2"] == 12
    _, out, _ = run(capsys, "pairstats", "--graph", str(graph), "--p", "0.5", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "i,j,s,t,jaccard" and len(lines) == 7
    doc = json.loads(run(capsys, "pairstats", "--n", "30", "--seed", "2", "--p", "0.3")[1])
    assert abs(doc["residual"]) <= 1e-9


def test_gof_outputs_and_replay(tmp_path, capsys):
    out = tmp_path / "gof.csv"
    argv = ["gof", "--n", "100000", "--p", str((4 / 1e5) ** 0.5), "--trials", "2000",
            "--law", "poisson", "--lam", "4", "--seed", "5", "--out", str(out)]
    code, stdout, _ = run(capsys, *argv)
    assert code == 0
    report = json.loads(stdout)
    validate(report, "gof_report")
    assert report["statistic_kind"] == "TV" and report["reference"] == "Poi(4.0)"
    assert json.loads((tmp_path / "gof.csv.report.json").read_text()) == report
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir() if not p.name.endswith("manifest.json")}
    manifest = tmp_path / "gof.csv.manifest.json"
    validate(json.loads(manifest.read_text()), "manifest")
    assert run(capsys, "replay", str(manifest))[0] == 0
    again = {p.name: p.read_bytes() for p in tmp_path.iterdir() if not p.name.endswith("manifest.json")}
    assert first == again


def test_gof_json_sample_and_threads(tmp_path, capsys):
    docs = []
    for threads in ("1", "4", "16"):
        out = tmp_path / f"s{threads}.json"
        run(capsys, "gof", "--n", "300", "--p", "0.3", "--trials", "2500", "--seed", "7",
            "--format", "json", "--threads", threads, "--out", str(out))
        docs.append(out.read_bytes())
    assert docs[0] == docs[1] == docs[2]
    validate(json.loads(docs[0]), "sample")


def test_gof_degenerate_average(capsys):
    code, out, _ = run(capsys, "gof", "--mode", "average", "--n", "20", "--p", "1", "--trials", "3", "--seed", "1")
    doc = json.loads(out)
    validate(doc, "gof_report")
    assert code == 0 and doc["degenerate"] is True and doc["value"] is None


def test_sweep(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "const:0.3", "--n-list", "128,256,512", "--trials", "400", "--seed", "4", "--out", str(out)]
    assert run(capsys, *argv)[0] == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4 and lines[0].startswith("family,n,p,mode,regime,statistic,value")
    first = out.read_bytes()
    assert run(capsys, *argv)[0] == 0
    assert out.read_bytes() == first
    code, _, err = run(capsys, "sweep", "const:0.3", "--n-list", "", "--trials", "4", "--seed", "1")
    assert code == 2 and err.startswith("E_USAGE:")


def test_tolerance_table_override(tmp_path, capsys, monkeypatch):
    table = tolerances.defaults()
    table["ks_normal_max"] = 0.0
    path = tmp_path / "tol.json"
    path.write_text(json.dumps(table))
    monkeypatch.setenv("JRG_TOLERANCE_TABLE", str(path))
    doc = json.loads(run(capsys, "gof", "--n", "200", "--p", "0.3", "--trials", "200", "--seed", "1")[1])
    assert doc["threshold"] == 0.0 and doc["passed"] is False
    path.write_text(json.dumps({**table, "no_such_key": 1}))
    code, _, err = run(capsys, "moments", "--n", "10", "--p", "0.5")
    assert code == 2 and err.startswith("E_")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jaccard_rg.cli", "regime", "const:0.3"],
        capture_output=True, text=True, env={**os.environ}, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pair_regime"] == "PairNormal"
