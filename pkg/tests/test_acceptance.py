"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from cwb import suites

RESULTS: dict[int, str] = {}


def _record(n: int, label: str, checks, seconds: float, limit: float | None) -> bool:
    failed = [c.name for c in checks if not c.ok]
    slow = limit is not None and seconds >= limit
    ok = bool(checks) and not failed and not slow
    note = f"{len(checks) - len(failed)}/{len(checks)} checks, {seconds:.1f}s"
    if limit is not None:
        note += f" (limit {limit:.0f}s)"
    if failed:
        note += f"; failed: {', '.join(failed)}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2} {label}: {note}"
    RESULTS[n] = line
    print(line, flush=True)
    return ok


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


CRITERIA = [
    (1, "acceptability", suites.acceptability, 10),
    (2, "recursion", suites.recursion, 30),
    (3, "lemma-ext", suites.lemma_ext, 120),
    (4, "nbar-friedberg", suites.nbar_friedberg_suite, 300),
    (5, "difference", suites.difference, None),
    (6, "structure", suites.structure_suite, None),
    (7, "complexity", suites.complexity_suite, None),
    (8, "adversaries", suites.adversaries, 120),
    (9, "open-sets", suites.open_sets, None),
]


@pytest.mark.parametrize("n,label,fn,limit", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(n, label, fn, limit):
    checks, seconds = _timed(fn)
    assert _record(n, label, checks, seconds, limit)


def _check_all() -> tuple[int, bytes]:
    r = subprocess.run([sys.executable, "-m", "cwb.cli", "check", "all"],
                       capture_output=True, timeout=1800)
    return r.returncode, r.stdout


def test_criterion_10_determinism():
    t = time.perf_counter()
    first, second = _check_all(), _check_all()
    seconds = time.perf_counter() - t
    same = first == second and first[0] == 0 and first[1]
    line = (f"{'PASS' if same else 'FAIL'} criterion 10 determinism: `cwb check all` twice, "
            f"{'identical' if first == second else 'different'} output, {len(first[1])} bytes, "
            f"{seconds:.1f}s")
    RESULTS[10] = line
    print(line, flush=True)
    assert same


if __name__ == "__main__":
    ok = True
    for n, label, fn, limit in CRITERIA:
        checks, seconds = _timed(fn)
        ok &= _record(n, label, checks, seconds, limit)
    try:
        test_criterion_10_determinism()
    except AssertionError:
        ok = False
    raise SystemExit(0 if ok else 1)
