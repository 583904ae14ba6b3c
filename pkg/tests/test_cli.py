import json

import pytest

from wachlog.cli import main, run


def test_operator_suite_is_deterministic(capsys):
    argv = ["verify", "--suite", "operators", "--p", "3", "--profile", "20,100,32", "--seed", "7",
            "--cases", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["schema"] == 1 and report["profile"] == "20,100,32"
    assert report["precision_used"] >= 10


def test_logmatrix_m0():
    code, report = run(["logmatrix", "--p", "3", "--kind", "ap0", "--k", "2", "--profile", "20,200,32"])
    assert code == 0
    assert report["M0"] == [["0", "3"], ["-1", "0"]]


@pytest.mark.parametrize("argv", [
    ["image", "--p", "3", "--k", "2", "--ap", "1", "--eta", "1"],
    ["image", "--p", "5", "--k", "2", "--ap", "5"],
    ["verify", "--suite", "operators", "--p", "4"],
    ["verify", "--suite", "operators", "--profile", "20,100"],
    ["verify", "--bogus"],
    [],
    ["verify", "--config", "/nonexistent/file.json", "--suite", "relations"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == 64


def test_config_and_overrides(tmp_path, monkeypatch):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, report = run(["verify", "--config", str(empty), "--suite", "relations"])
    assert code == 0 and report["profile"] == "20,200,32"
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 5, "profile": "20,100,32"}))
    code, report = run(["verify", "--config", str(cfg), "--suite", "relations", "--profile", "15,60,16"])
    assert report["profile"] == "15,60,16"
    cfg.write_text(json.dumps({"p": 4}))
    assert run(["verify", "--config", str(cfg), "--suite", "relations"])[0] == 64
    monkeypatch.setenv("WACHLOG_PROFILE", "12,50,10")
    assert run(["verify", "--suite", "relations"])[1]["profile"] == "12,50,10"


def test_submodule_and_out(tmp_path):
    out = tmp_path / "s.json"
    conds = json.dumps([{"x": "3", "V": [[1, 0]]}, {"x": "0", "V": []}])
    assert main(["submodule", "--d", "2", "--conditions", conds, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["projection_sets"] == [[1], [0, 1]]


def test_rho_and_image():
    assert run(["rho", "--p", "3", "--ap", "3"])[0] == 0
    code, report = run(["image", "--p", "3", "--k", "2", "--ap", "0", "--eta", "1"])
    # V = A Fil^0 = span(0, 1) and (0, 1) adj(A^T) = (1, 0): the second coordinate vanishes
    assert code == 0 and report["image"]["I2"] == [0]
