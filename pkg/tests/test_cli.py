import io
import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from rigidph import fixtures
from rigidph.cli import run
from rigidph.formats import read_filtration, write_filtration


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, make in fixtures.ALL.items():
        path = tmp_path / f"{name}.flt"
        write_filtration(make(), path)
        out[name] = str(path)
    return out


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def test_check(files):
    code, out, _ = call("check", files["TRI"])
    assert code == 0
    got = fields(out)
    assert (got["closed"], got["injective"], got["monotone"]) == ("true", "true", "true")
    assert (got["rho"], got["generic"]) == ("1", "false")


def test_sigma_jump(files):
    code, out, _ = call("sigma", files["TRI"], "--cycle", "[1] - [0]", "--epsilon", "101/100")
    assert code == 0
    got = fields(out)
    assert got["Sigma"] == "{AB, BC, AC}"
    assert sum(line.startswith("witness ") for line in out.splitlines()) == 3
    assert got["witness AC"].split(",")[-1] == "AB"


def test_rigidity_report(files):
    code, out, _ = call("rigidity", files["PATH3"], "--cycle", "[2] - [0]")
    assert code == 0
    got = fields(out)
    assert (got["a"], got["b"], got["R_u"], got["R_l"]) == ("2", "4", "inf", "1")
    assert (got["epsilon*"], got["limiting"]) == ("1/2", "R_l")


def test_json_mirrors_text(files):
    argv = ["rigidity", files["PATH3"], "--cycle", "[2] - [0]"]
    _, text, _ = call(*argv)
    _, raw, _ = call(*argv, "--json")
    data = json.loads(raw)
    got = fields(text)
    assert data["epsilon_star"] == got["epsilon*"]
    assert (data["R_u"], data["R_l"], data["a"], data["b"]) == (got["R_u"], got["R_l"], got["a"], got["b"])
    assert data["terminal_simplex"] == [1, 2]
    # no floating point anywhere
    assert not re.search(r"\d\.\d", raw + text)


def test_reports_are_deterministic(files):
    argv = ["breaking", files["PATH3G"], "--cycle", "[2] - [0]"]
    first = call(*argv)
    assert first == call(*argv)
    assert first[0] == 0
    got = fields(first[1])
    assert (got["t0"], got["delta1"], got["classification"]) == ("7/10", "BC", "sequential")
    assert got["prediction vs oracle"] == "agrees"
    assert call(*argv, "--threads", "2")[1] == first[1]


def test_barcode_and_bar_rigidity(files):
    code, out, _ = call("barcode", files["TRIF"], "--dim", "1")
    assert code == 0 and "dim 1: [5, 6) birth AC terminal ABC" in out
    code, out, _ = call("bar-rigidity", files["TRIF"], "--bar", "5,6", "--dim", "1", "--epsilon", "1/5")
    assert code == 0 and fields(out)["rigid"] == "true"


def test_perturb_round_trip(files, tmp_path):
    out_path = tmp_path / "g.flt"
    code, out, _ = call("perturb", files["EDGE"], "--swap", "A,B", "--epsilon", "3/4", "--out", str(out_path))
    assert code == 0
    g = read_filtration(out_path)
    f = read_filtration(files["EDGE"])
    assert g(fixtures.B) < g(fixtures.A)
    assert g.sup_distance(f) <= Fraction(3, 4)
    code, _, _ = call("perturb", files["TRI"], "--block", "AB,BC,AC", "--perm", "2,1,0",
                      "--epsilon", "11/10", "--out", str(out_path))
    assert code == 0
    g = read_filtration(out_path)
    assert g(fixtures.AC) < g(fixtures.BC) < g(fixtures.AB)


def test_perturb_with_matching(files, tmp_path):
    src = tmp_path / "near.flt"
    src.write_text("0 : 0\n1 : 1\n2 : 2\n0 1 : 3\n1 2 : 49/10\n0 2 : 5\n0 1 2 : 6\n")
    out_path = tmp_path / "g.flt"
    code, out, _ = call("perturb", str(src), "--swap", "BC,AC", "--epsilon", "1/5", "--out", str(out_path),
                        "--bar", "5,6", "--dim", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["matched_bar"]["terminal"] == [0, 1, 2]
    assert data["same_terminal"] is True
    assert abs(Fraction(data["matched_bar"]["b"]) - 6) <= Fraction(1, 5)
    g = read_filtration(out_path)
    assert g(fixtures.AC) < g(fixtures.BC)


@pytest.mark.parametrize("argv, status", [
    (["nosuch", "X"], 2),
    (["check"], 2),
    (["check", "{TRI}", "--field", "4"], 2),
    (["sigma", "{TRI}", "--cycle", "[1] - [0]"], 2),
    (["sigma", "{TRI}", "--cycle", "[1] [0]", "--epsilon", "1"], 2),
    (["check", "/nonexistent/file.flt"], 2),
    (["sigma", "{TRI}", "--cycle", "[1] - [0]", "--epsilon", "0"], 4),
    (["rigidity", "{TRI}", "--cycle", "[0,1] + [1,2] + [0,2]"], 4),
    (["bar-rigidity", "{TRIF}", "--bar", "5,6", "--dim", "1", "--epsilon", "1/4"], 0),
    (["perturb", "{PATH3}", "--swap", "AB,BC", "--epsilon", "1/2", "--out", "{OUT}"], 4),
    (["sigma", "{TRI}", "--cycle", "[1] - [0]", "--epsilon", "2", "--cap", "3"], 5),
])
def test_exit_statuses(files, tmp_path, argv, status):
    subst = {**files, "OUT": str(tmp_path / "o.flt")}
    argv = [a.format(**subst) for a in argv]
    code, out, err = call(*argv)
    assert code == status
    if status:
        assert out == "" and err


def test_invalid_file_stops_before_analysis(tmp_path):
    bad = tmp_path / "bad.flt"
    bad.write_text("0 : 0\n1 : 1\n0 1 : 1\n")
    for argv in (["check", str(bad)], ["sigma", str(bad), "--cycle", "[1] - [0]", "--epsilon", "1"]):
        code, out, err = call(*argv)
        assert (code, out) == (3, "")
        assert "DuplicateValue" in err
    bad.write_text("0 : 0\n0 1 : 1\n")
    assert call("check", str(bad))[0] == 3


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "rigidph", "check", files["EDGE"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "rho: 1" in proc.stdout
