import csv
import io
import json
import subprocess
import sys

import pytest

from floorsets.cli import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATION,
    SCAN_COLUMNS,
    main,
)
from floorsets.config import ScanConfig, parse_int, parse_int_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_enumerate_lines(capsys):
    code, out, err = run(capsys, "enumerate", "--x", "10")
    assert code == EXIT_OK
    assert out.split() == ["1", "2", "3", "5", "10"]
    assert "count=5 formula=5" in err


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--x", "100", "--format", "json")
    assert code == EXIT_OK
    values = json.loads(out)
    assert len(values) == 19 and values[-1] == 100


@pytest.mark.parametrize("argv", [["enumerate", "--x", "0"], ["enumerate"], ["nope"], ["count", "--x", "100", "--q", "3", "--a", "5"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_count_rows(capsys):
    code, out, _ = run(capsys, "count", "--x", "100", "--q", "2", "--a", "2")
    assert code == EXIT_OK
    (row,) = rows(out)
    assert list(row) == SCAN_COLUMNS
    assert row["count"] == "11" and float(row["main_term"]) == 10.0
    _, out, _ = run(capsys, "count", "--x", "100", "--q", "1", "--a", "1")
    assert rows(out)[0]["count"] == "19"


def test_count_residue_zero_is_q(capsys):
    _, out0, _ = run(capsys, "count", "--x", "100", "--q", "3", "--a", "0")
    _, out3, _ = run(capsys, "count", "--x", "100", "--q", "3", "--a", "3")
    assert out0 == out3
    assert rows(out0)[0]["a"] == "3"


def test_decompose_row(capsys):
    code, out, _ = run(capsys, "decompose", "--x", "10^6", "--q", "1", "--a", "1")
    assert code == EXIT_OK
    (row,) = rows(out)
    assert int(row["s1"]) + int(row["s2"]) + int(row["boundary_correction"]) == int(row["count"]) == 1999


def test_scan_default_passes(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    code, _, err = run(capsys, "scan", "--x-grid", "10^4,10^5,10^6,10^7", "--threads", "1", "--output", str(path))
    assert code == EXIT_OK
    data = rows(path.read_text())
    assert [int(r["x"]) for r in data] == sorted(int(r["x"]) for r in data)
    assert max(abs(float(r["normalized_error"])) for r in data) <= 10
    assert "max_abs_normalized_error" in err


def test_scan_violation_exit(capsys):
    code, _, _ = run(capsys, "scan", "--x-grid", "10^4", "--constant-C", "1e-9")
    assert code == EXIT_VIOLATION


def test_scan_empty_grid(capsys):
    code, _, _ = run(capsys, "scan", "--x-grid", "")
    assert code == EXIT_USAGE


def test_scan_policies_and_json(capsys):
    code, out, _ = run(
        capsys, "scan", "--x-grid", "10^4", "--q-policy", "list:1,2", "--threads", "1", "--format", "json"
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert [(r["q"], r["a"]) for r in data] == [(1, 1), (2, 1), (2, 2)]
    code, out, _ = run(capsys, "scan", "--x-grid", "10^4", "--q-policy", "single:5", "--a-policy", "list:0,2")
    assert [(r["q"], r["a"]) for r in rows(out)] == [("5", "2"), ("5", "5")]


def test_scan_deterministic_across_threads(capsys):
    argv = ["scan", "--x-grid", "10^4,30000", "--q-policy", "list:1..6"]
    _, one, _ = run(capsys, *argv, "--threads", "1")
    _, two, _ = run(capsys, *argv, "--threads", "2")
    assert one == two


def test_vaaler_check(capsys):
    code, out, _ = run(capsys, "vaaler-check", "--H", "10,100", "--samples", "1000")
    assert code == EXIT_OK
    data = rows(out)
    assert len(data) == 2000
    assert all(float(r["slack"]) >= -(2.0**-40) for r in data)


def test_expsum_check_default(capsys):
    code, out, _ = run(capsys, "expsum-check")
    assert code == EXIT_OK
    data = rows(out)
    assert data and all(float(r["ratio_bound"]) <= 1 and float(r["ratio_reduced"]) <= 1 for r in data)


def test_expsum_check_violation(capsys):
    code, _, _ = run(capsys, "expsum-check", "--x-grid", "10^5", "--q", "1", "--constant-C", "1e-6")
    assert code == EXIT_VIOLATION


def test_primes(capsys):
    code, out, _ = run(capsys, "primes", "--x", "100")
    assert code == EXIT_OK
    assert rows(out)[0]["pi_s"] == "5"


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--x", "10^5")
    assert code == EXIT_OK
    assert {r["op"] for r in rows(out)} == {"enumerate", "count", "decompose", "pi_s"}


def test_internal_error_exit(capsys, monkeypatch):
    import floorsets.cli as cli

    def boom(x):
        raise RuntimeError("simulated")

    monkeypatch.setattr(cli.floorset, "enumerate_floor_set", boom)
    code, _, err = run(capsys, "enumerate", "--x", "10")
    assert code == EXIT_INTERNAL
    assert "simulated" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "floorsets", "count", "--x", "100", "--q", "3", "--a", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert rows(proc.stdout)[0]["count"] == "7"


def test_parse_helpers():
    assert parse_int("10^6") == parse_int("1e6") == parse_int("1_000_000") == 10**6
    assert parse_int_list("1..3,7") == [1, 2, 3, 7]
    with pytest.raises(ValueError):
        parse_int("1.5e0")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(x_grid=[]),
        dict(x_grid=[100], constant_C=0),
        dict(x_grid=[100], q_policy="single", q_values=[1, 2]),
        dict(x_grid=[100], q_policy="weird"),
        dict(x_grid=[2]),
    ],
)
def test_scan_config_validation(kwargs):
    with pytest.raises(ValueError):
        ScanConfig(**kwargs)
