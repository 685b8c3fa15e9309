import json
import subprocess
import sys
from pathlib import Path

import pytest

from deltaprism import witt
from deltaprism.cli import main
from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import DeltaPoly

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "deltaprism", *args], capture_output=True, text=True, cwd=ROOT)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.parametrize("args,expected", [
    (["eval", "-p", "2", "-N", "4", "D(x^2)"], "2*x^2*x@1 + 2*x@1^2"),
    (["eval", "0"], "0"),
    (["eval", "D(x + y)"], "x@1 - x*y + y@1"),
    (["frobenius", "-p", "3", "x"], "x^3 + 3*x@1"),
    (["witt-add", "1,0", "1,0"], "(2, -1)"),
    (["ghost", "a0,a1"], "(a0, a0^2 + 2*a1)"),
])
def test_text_outputs(capsys, args, expected):
    assert main(args) == 0
    assert capsys.readouterr().out.strip() == expected


@pytest.mark.parametrize("args,code", [
    (["eval", "x@@"], 2),
    (["eval", "D(x@3)"], 3),
    (["eval", "-p", "2", "-N", "1", "D(x)"], 3),
    (["envelope", str(SPECS / "crystalline.prism"), "x x"], 3),
    (["envelope", str(SPECS / "crystalline.prism"), "w"], 3),
    (["envelope", "missing.prism"], 3),
    (["eval", "-p", "4", "x"], 3),
    (["witt-add", "1,0", "1"], 3),
])
def test_exit_codes(capsys, args, code):
    assert main(args) == code
    assert capsys.readouterr().err


def test_envelope_reports(capsys):
    spec = str(SPECS / "crystalline.prism")
    assert main(["envelope", spec, "x", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["distinguished"] is True and rep["generators"] == ["x", "y"]
    assert main(["envelope", spec, "--format", "json"]) == 0
    empty = json.loads(capsys.readouterr().out)
    assert empty["generators"] == ["x"] and empty["relations"] == []


def test_sequence_forms(capsys):
    spec = str(SPECS / "crystalline.prism")
    assert main(["envelope", spec, "x, 2", "--format", "json"]) == 0
    comma = json.loads(capsys.readouterr().out)
    assert comma["generators"] == ["x", "y1", "y2"]


def test_dials_override_spec(capsys):
    assert main(["envelope", str(SPECS / "crystalline.prism"), "x", "-D", "2", "-N", "1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["params"] == {"p": 2, "N": 1, "K": 3, "D": 2}


@pytest.mark.parametrize("name,args", [
    ("envelope_crystalline.json", ["envelope", "specs/crystalline.prism", "x", "--format", "json"]),
    ("cech_crystalline.json", ["cech", "specs/crystalline_cech.prism", "x", "-L", "2", "--format", "json"]),
    ("cech_crystalline.txt", ["cech", "specs/crystalline_cech.prism", "x", "-L", "2"]),
    ("suite_delta_p2_seed7.txt", ["suite", "delta", "-p", "2", "--seed", "7"]),
])
def test_golden_and_deterministic(name, args):
    first = run(*args)
    second = run(*args)
    assert first == second
    assert first[0] == 0
    assert first[1] == (GOLDEN / name).read_text()


def test_suite_witt_p3(capsys):
    assert main(["suite", "witt", "-p", "3"]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_corrupted_witt_table_fails_suite(monkeypatch, capsys):
    real = witt.build_table

    def corrupted(p, n):
        t = real(p, n)
        if n < 2:
            return t
        bad = t.sum_polys[1] + DeltaPoly.const(CoeffRing.exact(p), 1)
        return witt.WittPolynomialTable(p, n, (t.sum_polys[0], bad) + tuple(t.sum_polys[2:]), t.prod_polys)

    monkeypatch.setattr(witt, "build_table", corrupted)
    assert main(["suite", "all", "-p", "2"]) == 1
    out = capsys.readouterr().out
    assert any(line.startswith("FAIL") and "ghost-homomorphism" in line for line in out.splitlines())
