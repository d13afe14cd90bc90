"""Self-check suites: every suite passes and reports one line per check."""

import pytest

from resonance_atlas import validation


@pytest.mark.parametrize("name", sorted(validation.SUITES))
def test_suite_passes(name):
    ok, lines = validation.SUITES[name](10.0)
    assert ok, "\n".join(lines)
    assert lines
    assert all(("ok" in line) or ("FAIL" in line) or line.startswith("  ")
               for line in lines)


def test_run_suites_aggregates():
    ok, lines = validation.run_suites(["freecase", "oracle3d"])
    assert ok
    joined = "\n".join(lines)
    assert "freecase" in joined and "oracle3d" in joined


def test_measured_slopes_match_design_orders():
    slopes = validation.measure_slopes(10.0)
    assert set(slopes) == set(validation.EXPECTED_SLOPES)
