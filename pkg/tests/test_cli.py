import json
import subprocess
import sys
from fractions import Fraction

import pytest

from eulerops.exact import XSeries


def test_indicial_json(run_cli):
    code, out, _ = run_cli("indicial", "--op", "4*x^2*d^2 + 2*x*d + x", "--json")
    assert code == 0
    assert json.loads(out) == {"roots": ["0", "1/2"]}


def test_indicial_human(run_cli):
    code, out, _ = run_cli("indicial", "--op", "4*x^2*d^2 + 2*x*d + x")
    assert code == 0
    assert "roots: 0, 1/2" in out


def test_family_laguerre_json(run_cli):
    code, out, _ = run_cli("family", "laguerre", "--n", "2", "--alpha", "0", "--json")
    assert code == 0
    assert json.loads(out) == {"coefficients": {"0": "1", "1": "-2", "2": "1/2"}}


def test_degenerate_solve_exits_3(run_cli):
    code, out, _ = run_cli("solve", "--op", "x*d^2 + d + x*1", "--json")
    assert code == 3
    err = json.loads(out)["error"]
    assert err["kind"] == "degenerate"


def test_resonant_solve_exits_3(run_cli):
    code, out, _ = run_cli("solve", "--op", "D*(D - 2) - x*(D + 1/2)*(D + 1/3)", "--root", "0", "--json")
    assert code == 3
    assert json.loads(out)["error"]["kind"] == "resonance"


@pytest.mark.parametrize("argv", [
    ("solve", "--op", "x*d^2 +", "--json"),
    ("indicial", "--op", "1.5*x", "--json"),
    ("indicial", "--op", "a*x", "--json"),
    ("family", "laguerre", "--json"),
    ("family", "nosuch", "--json"),
    ("ladder", "hg-lowering", "--json"),
])
def test_usage_errors_exit_2(run_cli, argv):
    code, out, _ = run_cli(*argv)
    assert code == 2
    assert set(json.loads(out)["error"]) == {"kind", "detail"}


def test_human_errors_go_to_stderr(run_cli):
    code, out, err = run_cli("indicial", "--op", "x +")
    assert code == 2 and out == "" and "byte 3" in err


def test_solve_family_and_residual(run_cli, tmp_path):
    code, out, _ = run_cli("solve", "--family", "hg2f1", "--alpha", "1/2", "--beta", "1/2",
                           "--gamma", "3/2", "--order", "6", "--json")
    assert code == 0
    doc = json.loads(out)
    first = XSeries.from_json(doc["solutions"][0]["solution"])
    assert [first.coefficient(k) for k in range(3)] == [1, Fraction(1, 6), Fraction(3, 40)]
    path = tmp_path / "sol.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run_cli("residual", "--op", "D*(D + 1/2) - x*(D + 1/2)^2", "--solution", str(path), "--json")
    assert code == 0 and json.loads(out)["zero"] is True
    code, _, _ = run_cli("residual", "--op", "D*(D + 1/2) - x*(D + 1/3)^2", "--solution", str(path))
    assert code == 1


def test_solve_with_bindings(run_cli):
    code, out, _ = run_cli("solve", "--op", "x*d^2 + (g - x)*d - a", "--param", "g=2",
                           "--param", "a=-3", "--root", "0", "--json")
    assert code == 0
    sol = json.loads(out)["solutions"][0]
    assert sol["terminated"] is True
    assert sol["solution"]["coefficients"] == {"0": "1", "1": "-3/2", "2": "1/2", "3": "-1/24"}


def test_ladder_table(run_cli):
    code, out, _ = run_cli("ladder", "ch-raising", "--gamma", "2", "--n", "0:3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and [r["expected"] for r in doc["rows"]] == ["-2", "-3", "-4", "-5"]


def test_rodriguez_and_genfunc(run_cli):
    assert run_cli("rodriguez", "hermite", "--n", "6")[0] == 0
    assert run_cli("rodriguez", "laguerre", "--n", "6", "--json")[0] == 0
    code, out, _ = run_cli("genfunc", "chebyshev-u", "--order", "5", "--json")
    assert code == 0 and json.loads(out)["equal"] is True
    assert run_cli("genfunc", "laguerre-operator", "--order", "6", "--nx", "6")[0] == 0


def test_commutator(run_cli):
    code, out, _ = run_cli("commutator", "--op", "d", "--op2", "x", "--json")
    assert code == 0
    assert json.loads(out) == {"commutator": "1", "terms": [{"coeff": "1", "x_power": 0, "d_order": 0}]}


def test_family_series_output(run_cli):
    code, out, _ = run_cli("family", "periodic-cos", "--a", "1", "--order", "4")
    assert code == 0
    assert out.strip() == "1 - 1/2*x^2 + 1/12*x^4 + O(x^5)"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eulerops.cli", "indicial", "--op", "x*d", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"roots": ["0"]}


@pytest.mark.parametrize("content", ['{"error": {"kind": "resonance", "detail": "x"}}', '{"base_exponent": "0"}', "not json"])
def test_residual_rejects_non_solutions(run_cli, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    code, out, _ = run_cli("residual", "--op", "d", "--solution", str(path), "--json")
    assert code == 2 and json.loads(out)["error"]["kind"] == "invalid-input"
