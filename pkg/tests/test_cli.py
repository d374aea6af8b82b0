import csv
import io
import json

import pytest

from hsdim.cli import main

CANTOR = '{"kind": "digit", "base": 3, "digits": [0, 2], "depth": 12}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_count_csv():
    code, out, err = call("count", "--set", CANTOR, "--base", "3", "--levels", "1..8")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["count"]) for r in rows] == [2**k for k in range(1, 9)]
    assert "scale" in err  # summary table goes to stderr without -o


def test_generate_then_count(tmp_path):
    path = tmp_path / "cantor.json"
    assert call("generate", "cantor", "--depth", "6", "-o", str(path))[0] == 0
    code, out, _ = call("count", "--set", str(path), "--base", "3", "--levels", "2,4")
    assert code == 0 and out.splitlines()[1:] == ["1/9,4,4,4", "1/81,16,16,16"]


def test_generate_schedule():
    code, out, _ = call("generate", "schedule")
    assert code == 0
    assert json.loads(out) == {"m": [0, 1, 2, 3, 6, 12, 32, 96], "t": ["1/2", "1/3", "1/4"]}


def test_output_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, out, _ = call("profile", "--set", '{"kind": "harmonic", "n_max": 20}', "--scales", "deltas", "--t", "0,1/2", "-o", str(path))
        assert code == 0 and "value" in out
    assert a.read_bytes() == b.read_bytes()


def test_profile_critical_exponent():
    code, out, _ = call("profile", "--set", CANTOR, "--base", "3", "--levels", "1..5", "--t", "log(2)/log(3)")
    assert code == 0
    assert all(float(r["value"]) == pytest.approx(1.0) for r in csv.DictReader(io.StringIO(out)))


def test_estimate_harmonic():
    code, out, err = call("estimate", "--set", '{"kind": "harmonic", "n_max": 64}', "--scales", "deltas", "--t", "1/2")
    assert code == 0
    doc = json.loads(out)
    assert 0.45 <= doc["dimension"]["slope"] <= 0.55
    assert doc["liminf"][0]["estimate"] is True
    assert "premeasure-based" in err


def test_verify_suite():
    code, out, _ = call("verify", "--suite", "ball")
    assert code == 0
    assert all(r["status"] == "pass" for r in json.loads(out))


def test_run_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "count", "set": json.loads(CANTOR), "base": 3, "levels": [1, 2, 3]}))
    code, out, _ = call("run", "--config", str(cfg))
    assert code == 0 and out.splitlines()[-1] == "1/27,8,8,8"


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"set": json.loads(CANTOR), "base": 3, "levels": "1..3"}))
    code, out, _ = call("count", "--config", str(cfg), "--levels", "4")
    assert code == 0 and out.splitlines()[1:] == ["1/81,16,16,16"]


@pytest.mark.parametrize(
    "argv",
    [
        ("count", "--set", '{"kind": "bogus"}', "--base", "3", "--levels", "1"),
        ("count", "--set", CANTOR, "--levels", "1..3"),
        ("count", "--set", "{not json", "--base", "3", "--levels", "1"),
        ("frobnicate",),
        (),
        ("count", "--set", CANTOR, "--base", "3", "--levels", "1", "--exact-cap", "0"),
    ],
)
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_bad_config_exit_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "count", "unknown_key": 1}))
    assert call("run", "--config", str(cfg))[0] == 2


def test_engine_error_exit_3():
    code, _, err = call("count", "--set", CANTOR, "--base", "3", "--levels", "13")
    assert code == 3 and "engine error" in err


def test_exact_cap_env(monkeypatch):
    monkeypatch.setenv("HSDIM_EXACT_CAP", "3")
    pts = '{"kind": "finite", "points": [["0"], ["1/8"], ["1/4"], ["1/2"], ["1"]]}'
    code, _, err = call("count", "--set", pts, "--radii", "1/100", "--mode", "exact")
    assert code == 3 and "cap" in err
    assert call("count", "--set", pts, "--radii", "1/100", "--mode", "exact", "--exact-cap", "8")[0] == 0
