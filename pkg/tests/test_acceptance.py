"""The ten acceptance criteria, each at its stated time limit.

Every test appends one PASS/FAIL line, printed in the terminal summary.
"""
import pytest

from hll.suites import run_suite

from conftest import ACCEPTANCE_LINES

CRITERIA = [
    (1, "formula-ramified", 60.0),
    (2, "formula-inert", 60.0),
    (3, "r-prime", 30.0),
    (4, "m-stability", None),
    (5, "msroot", 60.0),
    (6, "unitarity", None),
    (7, "witness", 120.0),
    (8, "p-integrality", None),
    (9, "assembly", None),
    (10, "fourier-relation", None),
]


@pytest.mark.parametrize("number,suite,limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, suite, limit):
    res = run_suite(suite)
    in_time = limit is None or res.elapsed < limit
    ok = res.passed and in_time
    budget = f"< {limit:.0f} s" if limit else "no limit"
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {suite}: {res.summary or ''} "
            f"[{res.elapsed:.1f} s, {budget}]")
    if not res.passed:
        line += f" first failures: {res.failures[:2]}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert res.passed, res.failures[:5]
    assert in_time, f"{suite} took {res.elapsed:.1f} s (limit {limit} s)"
