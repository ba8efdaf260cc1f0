import json
import subprocess
import sys

import pytest

from chaincodes.cli import (EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_VERIFY,
                            run_command)


def run(capsys, *argv):
    status = run_command(argv)
    out, err = capsys.readouterr()
    return status, out, err


def test_lift(capsys):
    status, out, _ = run(capsys, "lift", "--ring", "Z:2^2", "--group", "cyclic:3",
                         "--idempotent", "x+x^2")
    assert status == EXIT_OK
    assert out == "2+x+x^2\nverified: true\n"


def test_lift_json(capsys):
    status, out, _ = run(capsys, "lift", "--ring", "Z:2^3", "--group", "cyclic:3",
                         "--idempotent", "x+x^2", "--format", "json")
    data = json.loads(out)
    assert status == EXIT_OK and data["verified"] and data["ring"] == "Z:2^3"


def test_lift_rejects_non_idempotent(capsys):
    status, _, err = run(capsys, "lift", "--ring", "Z:2^2", "--group", "cyclic:3",
                         "--idempotent", "x")
    assert status == EXIT_PARSE
    assert json.loads(err)["exit"] == EXIT_PARSE


def test_factor(capsys):
    status, out, _ = run(capsys, "factor", "--p", "2", "--n", "7")
    assert status == EXIT_OK
    assert out.split() == ["x+1", "x^3+x+1", "x^3+x^2+1"]
    _, out, _ = run(capsys, "factor", "--p", "2", "--n", "3", "--format", "csv")
    assert out == "degree,factor\n1,x+1\n2,x^2+x+1\n"


def test_table_and_recheck(capsys, tmp_path):
    certs = tmp_path / "certs"
    status, out, _ = run(capsys, "table", "--from", "10", "--to", "16", "--ring", "Z:2^2",
                         "--cert-dir", str(certs))
    assert status == EXIT_OK
    assert out == "2n,d_H\n10,2\n12,2\n14,3\n16,1\n"
    assert len(list(certs.glob("*.json"))) == 4
    status, out, _ = run(capsys, "table", "--recheck", str(certs))
    assert status == EXIT_OK and out.count(": ok") == 4

    cert = certs / "dihedral-14.json"
    data = json.loads(cert.read_text())
    data["report"]["best_distance"] = 4
    cert.write_text(json.dumps(data))
    status, _, err = run(capsys, "table", "--recheck", str(certs))
    assert status == EXIT_VERIFY and json.loads(err)["error"] == "verification-failure"


def test_table_json_carries_reference_values(capsys, tmp_path):
    status, out, _ = run(capsys, "table", "--from", "14", "--to", "14", "--format", "json",
                         "--cert-dir", str(tmp_path))
    row = json.loads(out)["rows"][0]
    assert status == EXIT_OK
    assert (row["d_H"], row["published"], row["self_dual_bound"]) == (3, 3, 3)


def test_search_selfdual(capsys, tmp_path):
    cert = tmp_path / "c.json"
    status, out, _ = run(capsys, "search-selfdual", "--group", "dihedral:16",
                         "--certificate", str(cert), "--format", "csv")
    assert status == EXIT_OK and out == "2n,d_H\n16,1\n"
    status, out, _ = run(capsys, "search-selfdual", "--recheck", str(cert))
    assert status == EXIT_OK


def test_min_distance_from_certificate(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "search-selfdual", "--group", "dihedral:14", "--certificate", str(cert))
    status, out, _ = run(capsys, "min-distance", "--code", str(cert), "--euclidean",
                         "--format", "json")
    data = json.loads(out)
    assert status == EXIT_OK
    assert data["d_H_theorem"] == data["d_H_exhaustive"] == 3
    assert data["d_E"] >= data["gamma_bound"]


def test_budget_exceeded(capsys, tmp_path):
    status, _, err = run(capsys, "search-selfdual", "--group", "dihedral:12", "--budget", "100",
                         "--certificate", str(tmp_path / "c.json"))
    payload = json.loads(err)
    assert status == EXIT_BUDGET
    assert (payload["required"], payload["budget"]) == (4096, 100)


def test_unsupported_inputs(capsys):
    status, _, _ = run(capsys, "search-selfdual", "--group", "cyclic:10")
    assert status == EXIT_UNSUPPORTED
    status, _, _ = run(capsys, "table", "--from", "10", "--to", "10", "--ring", "Z:3^2")
    assert status == EXIT_UNSUPPORTED
    status, _, _ = run(capsys, "search-selfdual", "--group", "dihedral:10",
                       "--strategy", "blockwise")
    assert status == EXIT_UNSUPPORTED


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["table", "--from", "11", "--to", "12"],
    ["lift", "--group", "cyclic:3"],
    ["verify", "--suite", "roundtrip", "--workers", "0"],
    ["min-distance", "--code", "/nonexistent.json"],
])
def test_parse_errors(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == EXIT_PARSE
    assert json.loads(err)["exit"] == EXIT_PARSE


def test_verify_suites(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "roundtrip", "--group", "dihedral:6",
                         "--ring", "Z:2^2;poly:3^3")
    assert status == EXIT_OK and out.count(": ok") == 2
    status, out, _ = run(capsys, "verify", "--suite", "parity", "--group", "cyclic:3",
                         "--ring", "Z:3^3")
    assert status == EXIT_OK
    assert out.strip() == "cyclic:3 Z:3^3: no self-dual relative projective codes (ℓ odd)"


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "f.txt"
    status, out, _ = run(capsys, "factor", "--p", "3", "--n", "4", "--output", str(dest))
    assert status == EXIT_OK and out == ""
    assert dest.read_text().split() == ["x+1", "x+2", "x^2+1"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chaincodes", "factor", "--p", "2", "--n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.split() == ["x+1", "x^2+x+1"]
