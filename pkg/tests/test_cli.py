import json
import subprocess
import sys

import pytest

from cartanlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--n", "4")
    assert code == 0
    labels = [line.split("\t")[0] for line in out.splitlines()]
    assert len(labels) == 33 and "h_B" in labels and "sl2-top-left" in labels


def test_catalog_emit_round_trips_through_classify(capsys, tmp_path):
    path = tmp_path / "hb.json"
    assert run(capsys, "catalog", "emit", "--label", "h_B", "--n", "4", "--out", str(path))[0] == 0
    code, out, err = run(capsys, "classify", str(path))
    rep = json.loads(out)
    assert code == 0
    assert rep["type"]["label"] == "T2.6-2" and rep["verdict"]["verdict"] == "HasCompactForm"
    assert rep["window"]["p"] == 2.0
    assert "citation: HasCompactForm: Thm 1.5" in err


def test_catalog_emit_with_params(capsys):
    code, out, _ = run(capsys, "catalog", "emit", "--label", "P2.10", "--n", "3",
                       "--params", '{"p": "3/2", "omega": "beta"}')
    doc = json.loads(out)
    assert code == 0 and doc["label"] == "P2.10" and len(doc["basis"]) == 2


def test_unknown_label_exits_2(capsys):
    code, _, err = run(capsys, "catalog", "emit", "--label", "T9.9")
    assert code == 2 and "unknown-label" in err


@pytest.mark.parametrize("spec,verdict", [("so1n_an@5", "NoCompactForm"),
                                          ("T2.6-1", "NoCompactForm"),
                                          ("sl2-top-left", "NoCompactForm")])
def test_classify_labels(capsys, spec, verdict):
    code, out, _ = run(capsys, "classify", spec)
    assert code == 0 and json.loads(out)["verdict"]["verdict"] == verdict


def test_classify_bad_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"ambient": "so2n", "n": 4, "basis": [{"x": [1]}]}))
    code, _, err = run(capsys, "classify", str(p))
    assert code == 2 and "basis[0].x: expected length 2, got 1" in err


def test_classify_not_closed(capsys, tmp_path):
    p = tmp_path / "open.json"
    p.write_text(json.dumps({"ambient": "so2n", "n": 4, "basis": [{"x": [1, 0]}, {"y": [1, 0]}]}))
    code, _, err = run(capsys, "classify", str(p))
    assert code == 2 and "not-closed" in err


def test_classify_malformed_json(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    code, _, err = run(capsys, "classify", str(p))
    assert code == 2 and "line 1" in err


def test_mu_csv_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["mu", "so1n_an@4", "--samples", "2", "--steps", "20", "--seed", "4"]
    assert run(capsys, *args, "--out", str(a))[0] == 0
    out = run(capsys, *args, "--out", str(b))[1]
    assert a.read_bytes() == b.read_bytes()
    res = json.loads(out)
    assert abs(res["window"]["p"] - 1) < 0.1 and res["seed"] == 4


def test_mu_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CARTANLAB_SEED", "11")
    code, out, err = run(capsys, "mu", "so1n_an@3", "--samples", "1", "--steps", "12")
    assert code == 0 and out.startswith("direction_id,t,u1,u2")
    assert json.loads(err)["seed"] == 11


def test_mu_insufficient_data_exits_3(capsys):
    code, _, _ = run(capsys, "mu", "zero@4", "--steps", "5")
    assert code == 3


def test_proper(capsys, tmp_path):
    csv_path = tmp_path / "d.csv"
    code, out, err = run(capsys, "proper", "--left", "SO(1,n)", "--right", "SU(1,m)",
                         "--csv", str(csv_path))
    rep = json.loads(out)
    assert code == 0 and rep["predicted"] == "proper" and rep["empirical"] == "proper"
    assert csv_path.read_text().startswith("radius,distance")
    assert "citation:" in err


def test_conjsu(capsys, tmp_path):
    yes, no, odd = tmp_path / "y.json", tmp_path / "n.json", tmp_path / "o.json"
    yes.write_text("[[0, 1], [-1, 0]]")
    no.write_text("[[0, 2], [-1, 0]]")
    odd.write_text("[[1, 2, 3], [4, 5, 6], [7, 8, 9]]")
    code, out, _ = run(capsys, "conjsu", "--matrix", str(yes), "--oracle")
    rep = json.loads(out)
    assert code == 0 and rep["decision"] == "yes" and rep["oracle"]["found"]
    assert json.loads(run(capsys, "conjsu", "--matrix", str(no))[1])["decision"] == "no"
    assert run(capsys, "conjsu", "--matrix", str(odd))[0] == 2


def test_conjsu_float_input(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text("[[0.1, 0.7], [-0.7, 0.1]]")
    assert json.loads(run(capsys, "conjsu", "--matrix", str(p))[1])["decision"] == "yes"


def test_sl3_commands(capsys):
    code, out, _ = run(capsys, "sl3", "bplus-cross", "--steps", "4")
    assert code == 0 and max(json.loads(out)["minima"]) < 1e-8
    code, out, _ = run(capsys, "sl3", "mu-perturb", "--samples", "20", "--g-scale", "1e2", "1e4")
    runs = json.loads(out)["runs"]
    assert code == 0 and len(runs) == 2


def test_sl3_crossing_on_compact_exits_2(capsys):
    assert run(capsys, "sl3", "bplus-cross", "--which", "so3")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cartanlab", "catalog", "list", "--n", "3"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "so1n_an" in r.stdout
