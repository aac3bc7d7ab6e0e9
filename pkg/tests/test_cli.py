import json
import os
import subprocess
import sys

import pytest

from hll import cli
from hll.config import SchemaError, load

DATA = os.path.join(os.path.dirname(__file__), "data")
THREE = os.path.join(DATA, "three_places.json")


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--out", str(out)])
    return code, out.read_bytes()


def edited(tmp_path, fn, src=THREE):
    obj = json.load(open(src))
    fn(obj)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.parametrize("command", ["gauss-sum", "epsilon", "root-number", "whittaker",
                                     "fourier-coeff", "nonvanishing-search"])
def test_commands_deterministic(command, tmp_path):
    c1, b1 = run([command, "--config", THREE], tmp_path, "a.json")
    c2, b2 = run([command, "--config", THREE, "--workers", "3"], tmp_path, "b.json")
    assert c1 == c2 == 0
    assert b1 == b2
    out = json.loads(b1)
    assert list(out) == sorted(out)


def test_output_shape(tmp_path):
    code, b = run(["fourier-coeff", "--config", THREE], tmp_path)
    out = json.loads(b)
    assert code == 0
    assert {"value", "residue", "place_trace"} <= set(out)
    assert [t["label"] for t in out["place_trace"]] == ["i3", "r5", "l7"]
    assert set(out["value"]) == {"M", "ell", "a", "b"}


def test_gauss_sum_both_methods(tmp_path):
    code, b = run(["gauss-sum", "--config", THREE], tmp_path)
    assert code == 0 and json.loads(b)["equal"] is True


def test_malformed_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "hll-config/1", "places": [{"label": "x"}]}')
    code, b = run(["whittaker", "--config", str(bad)], tmp_path)
    assert code == 1 and json.loads(b)["error"] == "SchemaError"
    bad.write_text("{not json")
    assert run(["whittaker", "--config", str(bad)], tmp_path)[0] == 1


def test_hypothesis_exit_code(tmp_path):
    def f(obj):
        obj["places"][0]["c_v"] = {"val": 1, "unit": [1]}
    code, b = run(["whittaker", "--config", edited(tmp_path, f)], tmp_path)
    out = json.loads(b)
    assert code == 2 and out["place"] == "i3" and "hypothesis" in out


def test_bound_exit_code(tmp_path):
    code, b = run(["whittaker", "--config", THREE, "--enum-bound", "10"], tmp_path)
    assert code == 3 and json.loads(b)["error"] == "EnumerationBoundError"


def test_verification_exit_code(tmp_path, monkeypatch):
    real = cli.a_tilde_closed
    monkeypatch.setattr(cli, "a_tilde_closed", lambda *a, **k: real(*a, **k) + 1)
    code, b = run(["gauss-sum", "--config", THREE], tmp_path)
    assert code == 4 and json.loads(b)["error"] == "VerificationError"


def test_p_power_order_rejected(tmp_path):
    src = os.path.join(DATA, "mu_p_positive.json")

    def f(obj):
        del obj["embedding"]["allow_wild"]
    code, b = run(["nonvanishing-search", "--config", edited(tmp_path, f, src)], tmp_path)
    assert code == 1


def test_mu_p_positive_diagnosis(tmp_path):
    code, b = run(["nonvanishing-search", "--config", os.path.join(DATA, "mu_p_positive.json")],
                  tmp_path)
    out = json.loads(b)
    assert code == 0 and out["status"] == "total_vanishing"


def test_dichotomy_command(tmp_path):
    code, b = run(["dichotomy", "--config", os.path.join(DATA, "self_dual_inert.json")], tmp_path)
    out = json.loads(b)
    assert code == 0 and out["holds"] and out["sign"] == out["predicted"] == -1


def test_p_override(tmp_path):
    _, b5 = run(["whittaker", "--config", THREE, "--p", "5"], tmp_path, "a.json")
    _, b7 = run(["whittaker", "--config", THREE, "--p", "7", "--embedding-seed", "2"], tmp_path, "b.json")
    a, b = json.loads(b5), json.loads(b7)
    assert a["value"] == b["value"] and a["residue"] != b["residue"]


def test_verify_suite_header_and_table():
    proc = subprocess.run([sys.executable, "-m", "hll", "verify", "--suite", "formula-inert"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "closed formula" in proc.stderr
    out = json.loads(proc.stdout)
    assert out["passed"] and out["rows"]
    row = out["rows"][0]
    assert {"chi", "beta", "closed", "oracle", "equal"} <= set(row) and row["equal"] is True


def test_verify_workers_independent(tmp_path):
    c1, b1 = run(["verify", "--suite", "r-prime"], tmp_path, "a.json")
    c2, b2 = run(["verify", "--suite", "r-prime", "--workers", "4"], tmp_path, "b.json")
    assert c1 == c2 == 0 and b1 == b2


def test_loader_errors(tmp_path):
    def f(obj):
        obj["beta"]["nope"] = {"val": 0, "unit": [1]}
    with pytest.raises(SchemaError):
        load(edited(tmp_path, f))
