"""Acceptance suite: the fourteen self-validation criteria at full strength.

Criteria 1-13 run once through the library registry and are asserted
individually with their pinned tolerances (the tolerances live next to the
checks in barreldimer.validate); criterion 14 drives the installed CLI in a
fresh interpreter and must exit 0 in under five minutes.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import pytest

from barreldimer import validate

# per-criterion wall-clock ceilings, seconds
RUNTIME_CAPS = {1: 2.0, 2: 60.0, 3: 60.0, 4: 60.0, 7: 30.0}

CRITERION_NAMES = {index: name for index, name, _ in validate.CRITERIA}


@pytest.fixture(scope="module")
def full_results():
    results = validate.run_criteria("full")
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.index:2d} {res.name:28s} {res.seconds:7.2f}s  {res.detail}")
    return {res.index: res for res in results}


@pytest.mark.parametrize("index", sorted(CRITERION_NAMES))
def test_criterion(index, full_results):
    res = full_results[index]
    assert res.passed, f"criterion {index} ({res.name}): {res.detail}"
    cap = RUNTIME_CAPS.get(index)
    if cap is not None:
        assert res.seconds < cap, (
            f"criterion {index} ({res.name}) took {res.seconds:.2f}s, cap {cap:.0f}s"
        )


def test_criterion_14_cli_validate_full():
    started = time.monotonic()
    proc = subprocess.run(
        [sys.executable, "-m", "barreldimer.cli", "validate", "--level", "full"],
        capture_output=True,
        text=True,
        env=dict(os.environ),
        timeout=300,
    )
    elapsed = time.monotonic() - started
    print(proc.stdout)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < 300.0
    assert "FAIL" not in proc.stdout
