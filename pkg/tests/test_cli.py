import csv
import json

import pytest

from brownian_storage.cli import run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_asym_interior(capsys):
    assert run(["asym", "--c", "1", "--M", "6", "--T", "7"]) == 0
    assert _json(capsys) == {"phi": 4.0, "branch": "Interior", "s_star": 6.0, "a_star": 0.0}


def test_asym_short_and_csv(capsys, tmp_path):
    assert run(["asym", "--c", "1", "--u", "2", "--T", "1"]) == 0
    out = _json(capsys)
    assert out["exact"] < out["asymptotic"] < 1
    src = tmp_path / "in.csv"
    src.write_text("T,M\n3,6\n")
    dst = tmp_path / "out.csv"
    assert run(["asym", "--c", "1", "--csv", str(src), "--out", str(dst)]) == 0
    assert "Boundary" in dst.read_text()


def test_laplace_small_gamma(capsys):
    assert run(["laplace", "--c", "1", "--gamma", "0.0001", "--mode", "stationary"]) == 0
    assert abs(_json(capsys)["lt"] - (1 - 0.5e-4)) <= 1e-3


def test_laplace_table(tmp_path):
    out = tmp_path / "lt.csv"
    assert run(["laplace", "--c", "1", "--gamma", "0.1,1,10", "--mode", "transient", "--x", "1",
                "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "gamma,lt"


def test_mlp_csv(tmp_path):
    out = tmp_path / "path.csv"
    assert run(["mlp", "--c", "1", "--M", "1", "--T", "3", "--n", "1000", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1000 and list(rows[0]) == ["r", "f_star", "q"]


def test_sim_tail_is_seed_deterministic(capsys):
    args = ["sim-tail", "--c", "1", "--u", "1", "--T", "1", "--n", "5000", "--seed", "4"]
    assert run(args) == 0
    a = _json(capsys)
    assert run(args + ["--threads", "2"]) == 0
    b = _json(capsys)
    assert a["hits"] == b["hits"] and "asymptotic" in a


def test_sim_busy_and_scaling(capsys):
    assert run(["sim-busy", "--c", "1", "--n", "20000", "--h", "0.001", "--seed", "5"]) == 0
    assert _json(capsys)["passed"]
    assert run(["scaling", "--c", "1", "--T", "1", "--M", "0.5", "--n-superpose", "2",
                "--n", "20000"]) == 0
    assert "overlap" in _json(capsys)


def test_regime_from_file(tmp_path, capsys):
    exp = tmp_path / "e.json"
    exp.write_text(json.dumps([{"name": "i", "regime": "Intermediate", "params": {"c": 1},
                                "sim": {"h": 0.05}, "n": 5000, "M": 0.2, "T": 2.0,
                                "u_grid": [4, 9]}]))
    assert run(["regime", "--experiments", str(exp), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "i.csv").exists()


def test_validate_subset(capsys, tmp_path):
    out = tmp_path / "v.json"
    assert run(["validate", "--only", "4", "9", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "[PASS]" in text and "2/2 criteria passed" in text
    assert len(json.loads(out.read_text())) == 2


@pytest.mark.parametrize("argv", [[], ["nope"], ["asym", "--c", "1", "--bogus", "1"],
                                  ["asym", "--c", "1"], ["mlp", "--c", "1", "--M", "1"],
                                  ["laplace", "--c", "1", "--gamma", "x"]])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert "usage" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["asym", "--c", "0", "--M", "1", "--T", "1"],
                                  ["laplace", "--c", "1", "--gamma", "0"],
                                  ["mlp", "--c", "1", "--M", "-1", "--T", "1"]])
def test_domain_errors_exit_1(argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "validate" in capsys.readouterr().out
