"""CLI behavior: flags, exit codes, file outputs, determinism."""

import csv
import json
from math import log
from pathlib import Path

import numpy as np
import pytest

from walshprime import read_vector
from walshprime.cli import main
from walshprime.reporting import CORRELATION_COLUMNS


def run_cli(*argv) -> int:
    return main(list(argv))


def read_csv_rows(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sieve_writes_valid_cache(tmp_path, capsys):
    code = run_cli("sieve", "--n", "3", "--cache-dir", str(tmp_path / "cache"))
    assert code == 0
    printed = capsys.readouterr().out.strip()
    path = Path(printed)
    assert path.exists()
    vec = read_vector(path)
    want = np.array([0.0, 0.0, log(2), log(3), log(2), log(5), 0.0, log(7)])
    assert np.abs(vec.values - want).max() < 1e-15


def test_sieve_idempotent(tmp_path, capsys):
    cache_dir = str(tmp_path / "cache")
    assert run_cli("sieve", "--n", "8", "--cache-dir", cache_dir) == 0
    first = Path(capsys.readouterr().out.strip()).read_bytes()
    assert run_cli("sieve", "--n", "8", "--cache-dir", cache_dir) == 0
    captured = capsys.readouterr()
    assert "hit" in captured.err
    assert Path(captured.out.strip()).read_bytes() == first


def test_sieve_recovers_from_corruption(tmp_path, capsys):
    cache_dir = tmp_path / "cache"
    assert run_cli("sieve", "--n", "6", "--cache-dir", str(cache_dir)) == 0
    path = Path(capsys.readouterr().out.strip())
    blob = bytearray(path.read_bytes())
    blob[40] ^= 0xFF
    path.write_bytes(bytes(blob))
    assert run_cli("sieve", "--n", "6", "--cache-dir", str(cache_dir)) == 0
    captured = capsys.readouterr()
    assert "re-sieving" in captured.err
    read_vector(path)  # now valid again


def test_sieve_multiple_dimensions(tmp_path, capsys):
    code = run_cli("sieve", "--n", "3,5", "--cache-dir", str(tmp_path))
    assert code == 0
    paths = capsys.readouterr().out.split()
    assert len(paths) == 2
    assert all(Path(p).exists() for p in paths)


def test_report_csv_schema_and_row_count(tmp_path):
    out = tmp_path / "out"
    code = run_cli(
        "report", "--n", "10", "--out-dir", str(out), "--no-figures", "--K", "2"
    )
    assert code == 0
    with open(out / "correlation.csv", newline="") as fh:
        header = fh.readline().strip().split(",")
    assert tuple(header) == CORRELATION_COLUMNS
    rows = read_csv_rows(out / "correlation.csv")
    assert len(rows) == 8  # one per default zoo member
    for row in rows:
        assert row["n"] == "10"
        float(row["theorem_ratio"])  # parses
        assert float(row["K"]) == 2.0
    for name in ("tails.csv", "moments.csv", "low_level_mass.csv",
                 "coefficients.csv", "trends.csv"):
        assert (out / name).exists()
    # single dimension: no trends
    assert read_csv_rows(out / "trends.csv") == []


def test_report_zoo_selection_and_odd_suffix(tmp_path):
    out = tmp_path / "out"
    code = run_cli(
        "report", "--n", "8",
        "--zoo", "majority|odd,dictator:j=2",
        "--out-dir", str(out), "--no-figures",
    )
    assert code == 0
    rows = read_csv_rows(out / "correlation.csv")
    assert [row["spec"] for row in rows] == ["majority|odd", "dictator:j=2"]


def test_report_empty_zoo(tmp_path):
    out = tmp_path / "out"
    code = run_cli("report", "--n", "8", "--zoo", "", "--out-dir", str(out), "--no-figures")
    assert code == 0
    assert read_csv_rows(out / "correlation.csv") == []  # header only
    assert read_csv_rows(out / "moments.csv") != []  # table stats still present


def test_report_json_matches_csv_numbers(tmp_path):
    out_csv = tmp_path / "csv"
    out_json = tmp_path / "json"
    args = ["--n", "8,10", "--K", "2", "--seed", "3", "--no-figures"]
    assert run_cli("report", *args, "--format", "csv", "--out-dir", str(out_csv)) == 0
    assert run_cli("report", *args, "--format", "json", "--out-dir", str(out_json)) == 0
    csv_rows = read_csv_rows(out_csv / "correlation.csv")
    doc = json.loads((out_json / "report.json").read_text())
    json_rows = [rep for run in doc["runs"] for rep in run["correlations"]]
    assert len(csv_rows) == len(json_rows)
    for c_row, j_row in zip(csv_rows, json_rows):
        assert c_row["spec"] == j_row["spec"]
        for col in ("mean_f", "sum_lambda_f", "theorem_ratio", "pairing_tilde",
                    "mean_term", "low_term", "high_term"):
            assert float(c_row[col]) == j_row[col], col


def test_report_deterministic_bytes(tmp_path):
    args = ["report", "--n", "9", "--K", "2", "--seed", "1", "--no-figures"]
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_cli(*args, "--out-dir", str(out_a)) == 0
    assert run_cli(*args, "--out-dir", str(out_b)) == 0
    for name in ("correlation.csv", "tails.csv", "moments.csv",
                 "low_level_mass.csv", "coefficients.csv", "trends.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


def test_report_renders_figures(tmp_path):
    out = tmp_path / "out"
    code = run_cli("report", "--n", "8,9", "--out-dir", str(out))
    assert code == 0
    fig_dir = out / "figures"
    names = sorted(p.name for p in fig_dir.glob("*.png"))
    assert names == [
        "correlation_ratios.png",
        "level_profiles.png",
        "trends.png",
        "zoo_tails.png",
    ]
    assert all((fig_dir / name).stat().st_size > 1000 for name in names)


def test_report_no_figures_flag(tmp_path):
    out = tmp_path / "out"
    assert run_cli("report", "--n", "8", "--out-dir", str(out), "--no-figures") == 0
    assert not (out / "figures").exists()


def test_report_uses_cache_and_no_sieve(tmp_path, capsys):
    cache_dir = str(tmp_path / "cache")
    out = tmp_path / "out"
    # missing cache with --no-sieve is a config error
    code = run_cli(
        "report", "--n", "8", "--cache-dir", cache_dir, "--no-sieve",
        "--out-dir", str(out), "--no-figures",
    )
    assert code == 2
    capsys.readouterr()
    # after sieving, the same command succeeds
    assert run_cli("sieve", "--n", "8", "--cache-dir", cache_dir) == 0
    capsys.readouterr()
    code = run_cli(
        "report", "--n", "8", "--cache-dir", cache_dir, "--no-sieve",
        "--out-dir", str(out), "--no-figures",
    )
    assert code == 0


def test_capacity_exit_code(tmp_path):
    code = run_cli(
        "report", "--n", "29", "--out-dir", str(tmp_path), "--no-figures"
    )
    assert code == 3


def test_max_memory_raises_cap(tmp_path, capsys):
    # 1 MiB cap refuses even n=18 (2 MiB table)
    code = run_cli(
        "report", "--n", "18", "--max-memory", "1",
        "--out-dir", str(tmp_path), "--no-figures",
    )
    assert code == 3
    capsys.readouterr()
    # n=17 table is exactly 1 MiB, allowed
    code = run_cli(
        "report", "--n", "17", "--max-memory", "1",
        "--out-dir", str(tmp_path), "--no-figures", "--zoo", "majority",
    )
    assert code == 0


def test_bad_zoo_spec_exit_code(tmp_path):
    code = run_cli(
        "report", "--n", "8", "--zoo", "parity",
        "--out-dir", str(tmp_path), "--no-figures",
    )
    assert code == 2


def test_bad_n_exit_code(tmp_path):
    code = run_cli(
        "report", "--n", "8;9", "--out-dir", str(tmp_path), "--no-figures"
    )
    assert code == 2


def test_verify_quick_json_document(capsys):
    code = run_cli("verify", "--level", "quick")
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert code == 0
    assert doc["passed"] is True
    assert doc["level"] == "quick"
    assert len(doc["checks"]) == 17
    assert captured.err.count("PASS") == 17


def test_verify_failure_exit_code(monkeypatch, capsys):
    from walshprime import cli
    from walshprime.verify import CheckResult, VerificationReport

    def fake(level, progress=None):
        result = CheckResult("broken", False, "injected failure", 0.0)
        if progress:
            progress(result)
        return VerificationReport(level, (result,))

    monkeypatch.setattr(cli, "run_verification", fake)
    code = run_cli("verify", "--level", "quick")
    captured = capsys.readouterr()
    assert code == 4
    assert "FAIL broken" in captured.err
    doc = json.loads(captured.out)
    assert doc["passed"] is False
