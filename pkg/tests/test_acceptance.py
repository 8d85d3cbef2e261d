"""Acceptance battery: the eleven criteria at full level.

Each test prints one PASS/FAIL line (visible even without ``-s``) and then
asserts both the outcome and the wall-clock limit.  Criteria 3 and 10 run
exact searches with a 10^8 node budget and take several minutes each.
"""

import pytest

from rigbench.suite import CHECKS, run_check

# seconds; None means the criterion states no time limit
LIMITS = {1: 1, 2: 60, 3: 600, 4: 60, 5: None, 6: 5, 7: 60, 8: 30, 9: 300, 10: None, 11: 60}

NAMES = {c.number: c.name for c in CHECKS}


@pytest.mark.parametrize("number", sorted(LIMITS))
def test_criterion(number, capsys):
    result, secs = run_check(number, "full")
    limit = LIMITS[number]
    in_time = limit is None or secs < limit
    verdict = "PASS" if result.passed and in_time else "FAIL"
    bound = f"limit {limit}s" if limit else "no limit"
    with capsys.disabled():
        print(f"\ncriterion {number:>2} {verdict}: {NAMES[number]}: {result.detail} [{secs:.1f}s, {bound}]")
    assert result.passed, result.detail
    assert in_time, f"took {secs:.1f}s, limit {limit}s"
