"""Shared fixtures.

The default comparison run is expensive (two 10 s closed-loop
simulations), so it is produced once per session and shared by every
test that inspects it.  The recorded wall time covers both runs and is
what the runtime budget assertions use.
"""

from __future__ import annotations

import time

import pytest

from etsmc.engine import ComparisonOutcome, RunResult, compare, run


@pytest.fixture(scope="session")
def default_compare() -> tuple[ComparisonOutcome, float]:
    """Both trigger modes at all-default settings, plus wall seconds."""
    t0 = time.perf_counter()
    outcome = compare()
    wall = time.perf_counter() - t0
    return outcome, wall


@pytest.fixture(scope="session")
def short_et_run() -> RunResult:
    """A 2 s event-triggered run for trace-level tests."""
    from etsmc.engine import SimConfig

    return run("event", sim=SimConfig(duration=2.0))
