from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from nafourier.cli import main
from nafourier.padic import GOLDEN_ENV, golden_dir

FAST_CAPS = ["--max-ft-cyclic", "4", "--max-ft-2rank", "2", "--max-ft-symmetric", "3", "--max-pgl-count", "4",
             "--max-affine", "4", "--max-sl", "3", "--max-sl-oracle", "3", "--max-steinberg", "2", "--max-brute-limit", "100"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ft_z2(capsys):
    code, out, _ = run(capsys, "ft", "--group", "Z2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["matrix"]) == 4
    assert {v for row in data["matrix"] for v in row} == {"1/2", "-1/2"}


def test_elliptic_pairs_pgl6(capsys):
    code, out, _ = run(capsys, "elliptic-pairs", "--group", "PGL", "--rank", "6", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["regular_s"]["count"] == 2
    assert sum(data["per_unipotent"].values()) == data["total"] == 6


def test_verify_sp4(capsys):
    code, out, _ = run(capsys, "verify", "sp4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    flips = [c for c in data["checks"] if c["check_id"].startswith("sp4.flip.")]
    assert len(flips) == 6 and all(c["status"] == "pass" for c in flips)


def test_max_compact_json_list(capsys):
    code, out, _ = run(capsys, "max-compact", "--type", "C", "--rank", "2", "--isogeny", "sc", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [d["quotient_type"] for d in data] == [["C2"], ["C1", "C1"], ["C2"]]


@pytest.mark.parametrize(
    "argv",
    [
        ["compact-basis", "--n", "4"],
        ["dump-table", "--group", "S4"],
        ["dump-table", "--golden", "sp4-table1"],
        ["verify", "flip", "--group", "S3"],
        ["verify", "steinberg", "--n", "3"],
        ["verify", "pgl", "--n", "2"],
        ["verify", "sl", "--n", "5"],
        ["elliptic-pairs", "--group", "O2"],
    ],
)
@pytest.mark.parametrize("fmt", ["text", "json", "csv"])
def test_formats_succeed(capsys, argv, fmt):
    code, out, _ = run(capsys, *argv, "--format", fmt)
    assert code == 0
    assert out
    if fmt == "json":
        json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["ft"],
        ["ft", "--group", "Q8"],
        ["verify", "sl"],
        ["verify", "flip"],
        ["verify", "all", "--max-sl", "0"],
        ["elliptic-pairs", "--group", "PGL"],
        ["max-compact", "--type", "X", "--rank", "2"],
        ["ft", "--group", "Z2", "--format", "yaml"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_report_is_deterministic_and_round_trips(capsys):
    argv = ["verify", "all", "--format", "json", *FAST_CAPS]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert out1 == out2
    assert json.dumps(json.loads(out1), indent=2, sort_keys=True) + "\n" == out1
    assert code1 == code2


def test_lowered_caps_mark_skips_and_pass(capsys):
    code, out, _ = run(capsys, "verify", "all", "--format", "json", *FAST_CAPS)
    data = json.loads(out)
    assert data["summary"]["skipped"] > 0
    assert data["summary"]["fail"] == 0
    assert code == 0
    skipped = [c for c in data["checks"] if c["status"] == "skipped"]
    assert all(c["scalar"] == "size cap" for c in skipped)


def test_workers_give_identical_report(capsys):
    base = ["verify", "all", "--format", "json", *FAST_CAPS]
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--workers", "2")
    assert serial == parallel


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "sp4", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["summary"]["fail"] == 0


def test_corrupted_golden_is_a_hard_error(tmp_path):
    for f in golden_dir().iterdir():
        if f.is_file():
            shutil.copy(f, tmp_path / f.name)
    path = tmp_path / "sp4_table2.csv"
    path.write_text(path.read_text().replace("-1", "1", 1))
    env = {GOLDEN_ENV: str(tmp_path), "PATH": "/usr/bin:/bin"}
    for argv in (["verify", "sp4"], ["verify", "all", *FAST_CAPS]):
        proc = subprocess.run([sys.executable, "-m", "nafourier", *argv], env=env, capture_output=True, text=True)
        assert proc.returncode != 0
        assert "checksum mismatch" in proc.stderr
