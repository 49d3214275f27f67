"""Acceptance gate: one test per shipped guarantee.

Each test runs the matching check from rsvlc.acceptance and prints its
one-line verdict, so `pytest -v -s tests/test_acceptance.py` reads as a
pass/fail report.  The same checks back `rsvlc selftest`.
"""

from rsvlc.acceptance import CRITERIA


def _run(index):
    number, title, func = CRITERIA[index]
    detail = func()
    print(f"PASS {number:2d} {title}: {detail}")


def test_01_frame_structure():
    _run(0)


def test_02_preamble_orthogonality():
    _run(1)


def test_03_lambertian_consistency():
    _run(2)


def test_04_end_to_end_round_trip():
    _run(3)


def test_05_interference_localization():
    _run(4)


def test_06_regime_reproduction():
    _run(5)


def test_07_monotone_detectability():
    _run(6)


def test_08_rotation_invariant_sync():
    _run(7)


def test_09_clock_robustness():
    _run(8)


def test_10_determinism():
    _run(9)
