"""Acceptance criteria, one printed PASS/FAIL line each (run with ``pytest -s`` to see them)."""
from __future__ import annotations

import time

import pytest

from nafourier.padic import verify_sl
from nafourier.suite import DEFAULT_CAPS, run_section

CRITERIA = {
    1: ("c01-ft", "FT involution and unitarity"),
    2: ("c02-flip", "flip identity on commuting pairs"),
    3: ("c03-pairs", "elliptic pair counts"),
    4: ("c04-affine", "affine elliptic count"),
    5: ("c05-sl", "SL_n restriction identity and affine oracle"),
    6: ("c06-steinberg", "PGL_n Steinberg identity and PGL_2 rows"),
    7: ("c07-sp4", "Sp_4 golden tables and flip"),
    8: ("c08-smax", "S_max regression"),
    9: ("c09-gram", "elliptic Gram rank"),
    10: ("c10-mackey", "Mackey elliptic comparison"),
}

TIME_LIMITS = {1: 60.0}


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {CRITERIA[number][1]} ({detail})")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    section, _ = CRITERIA[number]
    _, checks, elapsed = run_section(section, DEFAULT_CAPS, 0)
    failures = [c.check_id for c in checks if c.status == "fail"]
    skips = [c.check_id for c in checks if c.status == "skipped"]
    limit = TIME_LIMITS.get(number)
    in_time = limit is None or elapsed < limit
    ok = bool(checks) and not failures and not skips and in_time
    detail = f"{len(checks)} checks, {len(failures)} failed, {len(skips)} skipped, {elapsed:.1f}s"
    if failures:
        detail += f", first failure {failures[0]}"
    _report(number, ok, detail)
    assert checks
    assert not skips
    assert in_time, f"{elapsed:.1f}s exceeds {limit}s"
    assert not failures, failures


def test_criterion_5_sl10_runtime():
    start = time.perf_counter()
    report = verify_sl(10)
    elapsed = time.perf_counter() - start
    ok = report.ok and elapsed < 600
    print(f"criterion  5 {'PASS' if ok else 'FAIL'}: SL_10 identity single-threaded ({elapsed:.2f}s)")
    assert report.ok
    assert elapsed < 600


if __name__ == "__main__":
    import sys

    outcomes = []
    for number in sorted(CRITERIA):
        try:
            test_criterion(number)
            outcomes.append(True)
        except AssertionError:
            outcomes.append(False)
    try:
        test_criterion_5_sl10_runtime()
    except AssertionError:
        outcomes.append(False)
    sys.exit(0 if all(outcomes) else 1)
