import json
import subprocess
import sys

import pytest

from twostep import acceptance
from twostep.cli import main

DEGENERATE = {"m": 1, "n": 3, "forms": [[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]]}
SCALED = {"m": 1, "n": 2, "forms": [[[0, 2], [-2, 0]]]}


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        p = tmp_path / name
        p.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(p)

    return {
        "h3": write("H3.json", '{"forms":[[[0,1],[-1,0]]],"m":1,"n":2}'),
        "deg": write("deg.json", DEGENERATE),
        "scaled": write("scaled.json", SCALED),
        "bad": write("bad.json", '{"m":1,"n":2,"forms":[[[1,0],[0,0]]]}'),
        "m2": write("m2.json", {"m": 2, "n": 2, "forms": [[[0, 1], [-1, 0]], [[0, 0], [0, 0]]]}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_comm(capsys, files):
    assert run(capsys, "comm", files["h3"], "0;1,0", "0;0,1") == (0, "1;0,0\n", "")


def test_mul_inv(capsys, files):
    assert run(capsys, "mul", files["h3"], "0;1,0", "0;0,1")[1] == "1;1,1\n"
    assert run(capsys, "inv", files["h3"], "0;1,1")[1] == "1;-1,-1\n"


def test_structure(capsys, files):
    assert run(capsys, "class", files["h3"])[1] == "2\n"
    assert run(capsys, "ucs", files["h3"])[1] == "1,2\n"
    assert run(capsys, "center", files["deg"])[1] == "rank 2\n1;0,0,0\n0;0,0,1\n"
    assert run(capsys, "validate", files["h3"])[1] == "ok m=1 n=2\n"


def test_canon(capsys, files):
    code, out, _ = run(capsys, "canon", files["deg"])
    assert code == 0
    assert out == '{"forms":[[[0,1],[-1,0]],[[0,0],[0,0]]],"m":2,"n":2}\n'


def test_iso_exit_codes(capsys, files):
    code, out, _ = run(capsys, "iso", files["h3"], files["h3"])
    assert code == 0 and out.startswith("Equivalent\n")
    code, out, _ = run(capsys, "iso", files["h3"], files["scaled"])
    assert code == 1 and out == "NotEquivalent (skew divisors)\n"
    code, out, _ = run(capsys, "iso", files["m2"], files["m2"], "--budget", "2")
    assert code == 0


def test_iso_unknown(capsys, tmp_path):
    # same invariants, no witness reachable with budget 0
    a = {"m": 2, "n": 3, "forms": [[[0, 1, 0], [-1, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, 1], [0, -1, 0]]]}
    b = {"m": 2, "n": 3, "forms": [[[0, 0, 0], [0, 0, 1], [0, -1, 0]], [[0, 1, 1], [-1, 0, 0], [-1, 0, 0]]]}
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    pa.write_text(json.dumps(a))
    pb.write_text(json.dumps(b))
    code, out, _ = run(capsys, "iso", str(pa), str(pb), "--budget", "0")
    assert (code, out) == (2, "Unknown\n")


def test_fiber_pairing(capsys, files):
    assert run(capsys, "fiber", files["h3"], "--chi", "1/3")[1] == "0 1/3\n2/3 0\n"
    assert run(capsys, "pairing", files["h3"], "--chi", "1/3", "--b1", "1,0", "--b2", "0,1")[1] == "1/3\n"
    assert run(capsys, "pairing", files["h3"], "--chi", "1/2", "--b1", "2,0", "--b2", "0,1")[1] == "0\n"


def test_reconstruct(capsys, files):
    code, out, _ = run(capsys, "reconstruct", files["h3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == '{"forms":[[[0,1],[-1,0]]],"m":1,"n":2}'
    assert lines[1].startswith("k=0 i=0 j=1 winding=1 samples=")
    assert run(capsys, "reconstruct", files["h3"], "--noise", "1/16")[0] == 0
    assert run(capsys, "reconstruct", files["h3"], "--noise", "1/8")[0] == 65


def test_clockshift(capsys):
    code, out, _ = run(capsys, "clockshift", "--theta", "2/6")
    assert code == 0 and out.startswith("theta=1/3 q=3\n")


def test_data_errors(capsys, files):
    code, _, err = run(capsys, "validate", files["bad"])
    assert code == 65 and "NotSkew" in err
    assert run(capsys, "mul", files["h3"], "0;1", "0;0,1")[0] == 65
    assert run(capsys, "pairing", files["h3"], "--chi", "x", "--b1", "1,0", "--b2", "0,1")[0] == 65


def test_usage_errors(capsys, files, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["fiber", files["h3"]])
    assert info.value.code == 64
    assert run(capsys, "class", str(tmp_path / "missing.json"))[0] == 64


def test_selftest_exit(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", {"ok": lambda: (True, "fine")})
    code, out, _ = run(capsys, "selftest")
    assert (code, out) == (0, "[PASS] ok: fine\n")
    monkeypatch.setattr(acceptance, "CRITERIA", {"bad": lambda: (False, "broken")})
    code, out, _ = run(capsys, "selftest")
    assert (code, out) == (1, "[FAIL] bad: broken\n")


def test_subprocess_is_deterministic(files):
    cmd = [sys.executable, "-m", "twostep", "reconstruct", files["deg"], "--scramble", "3"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
