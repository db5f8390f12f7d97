import json
import subprocess
import sys
from fractions import Fraction

import pytest

from expected import G_TABLE, H_TABLE
from qeis import cli
from qeis.series import QExpansion


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table_line(name, row):
    return f"{name}(tau) = {QExpansion(row, len(row) - 1).to_string()}"


@pytest.mark.parametrize("which, table", [("g", G_TABLE), ("h", H_TABLE)])
def test_series_table_reproduces_published_rows(capsys, which, table):
    code, out, _ = run(capsys, which, "--k-max", "6", "--order", "8")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6
    for k, row in table.items():
        if len(row) == 9:
            assert lines[k - 1] == table_line(f"{which}_{k}", row)
        else:
            assert lines[k - 1].startswith(table_line(f"{which}_{k}", row)[:-9])


def test_rationals_printed_exactly(capsys):
    _, out, _ = run(capsys, "g", "--k-max", "1", "--order", "2")
    assert out.strip() == "g_1(tau) = -1/2 + q + q^2 + O(q^3)"


def test_u_rows_odd_vanish(capsys):
    code, out, _ = run(capsys, "u", "--k-max", "6", "--order", "6")
    assert code == 0
    lines = out.splitlines()
    for k in (1, 3, 5):
        assert lines[k - 1] == f"u_{k}(tau) = 0 + O(q^7)"


def test_eisenstein_json(capsys):
    code, out, _ = run(capsys, "G", "--k-max", "4", "--order", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert list(data) == ["G_2", "G_4"]
    assert data["G_2"]["coeffs"][0] == [0, "-1/24"]
    assert data["G_4"]["coeffs"][0] == [0, "1/240"]


@pytest.mark.parametrize("which", ["g", "h", "u", "G"])
def test_json_round_trip_is_byte_identical(capsys, which):
    _, out, _ = run(capsys, which, "--k-max", "4", "--order", "6", "--format", "json")
    rows = cli.parse_series_json(out)
    assert cli.render_series(rows, "json") + "\n" == out


def test_series_csv(capsys):
    _, out, _ = run(capsys, "h", "--k-max", "1", "--order", "2", "--format", "csv")
    assert out.splitlines() == ["series,n,coefficient", "h_1,0,-1/2", "h_1,1,2", "h_1,2,5"]


def test_anm_rows(capsys):
    code, out, _ = run(capsys, "anm", "--n-max", "3", "--format", "json")
    assert code == 0
    rows = [(r["n"], r["m"], r["value"]) for r in json.loads(out)]
    assert rows == [(1, 1, 1), (2, 2, 1), (3, 2, -2), (3, 3, 1)]


def test_bnm_rows(capsys):
    _, out, _ = run(capsys, "bnm", "--n-max", "1", "--format", "csv")
    assert out.splitlines() == ["n,m,value,threshold", "1,2,2,2"]


@pytest.mark.parametrize("which", ["anm", "bnm"])
def test_emitted_rows_respect_threshold(capsys, which):
    _, out, _ = run(capsys, which, "--n-max", "15", "--format", "json")
    assert all(r["m"] >= r["threshold"] for r in json.loads(out))


def test_coefficient_table_layout(capsys):
    _, out, _ = run(capsys, "anm", "--n-max", "2")
    assert out.splitlines()[0].split() == ["n", "m", "value", "threshold"]


@pytest.mark.parametrize("argv", [
    ["g", "--order", "0"],
    ["g", "--tol", "-1"],
    ["g", "--format", "xml"],
    ["verify", "--suite", "nope"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "error" in err


def test_env_order_default(capsys, monkeypatch):
    monkeypatch.setenv("QEIS_ORDER", "3")
    _, out, _ = run(capsys, "g", "--k-max", "1")
    assert out.strip().endswith("O(q^4)")
    _, out, _ = run(capsys, "g", "--k-max", "1", "--order", "2")
    assert out.strip().endswith("O(q^3)")


def test_env_order_invalid(capsys, monkeypatch):
    monkeypatch.setenv("QEIS_ORDER", "zero")
    code, _, err = run(capsys, "g")
    assert code == 2 and "QEIS_ORDER" in err


def test_verify_exact_passes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "exact", "--order", "12")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())
    assert "checks passed" in err


@pytest.mark.parametrize("target", ["g", "h"])
def test_verify_tampered_fails(capsys, target):
    code, out, err = run(capsys, "verify", "--suite", "exact", "--order", "10",
                         "--tamper", target)
    assert code == 1
    assert f"failed: {target}: three routes" in err
    assert any(line.startswith(f"FAIL  {target}: three routes") for line in out.splitlines())


def test_verify_json(capsys):
    _, out, _ = run(capsys, "verify", "--order", "8", "--format", "json")
    data = json.loads(out)
    assert {"name", "pass", "measure", "detail"} <= set(data[0])


def test_output_is_deterministic(capsys):
    first = run(capsys, "verify", "--suite", "numeric", "--seed", "7", "--format", "json")
    second = run(capsys, "verify", "--suite", "numeric", "--seed", "7", "--format", "json")
    assert first == second


def test_numeric_suite_reports_slow_limit(capsys):
    code, out, err = run(capsys, "verify", "--suite", "numeric", "--seed", "7")
    failing = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert [line.split()[1:3] for line in failing] == [["limit", "Hhat"]]
    assert code == 1 and "failed: limit Hhat" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qeis", "G", "--k-max", "2", "--order", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "G_2(tau) = -1/24 + q + 3*q^2 + O(q^3)\n"
