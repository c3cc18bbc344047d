"""Acceptance gate: the nine headline claims, one pass/fail line each.

Each criterion delegates to the matching check in ngon.checks, which encodes
the stated tolerances; the line printed here is the check's own summary.
"""

import pytest

from ngon import Theory, best_ic_encoding, run_ic
from ngon import checks


def _run(number, label, result):
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {number} ({label}): {status} - {result.details}")
    assert result.passed, f"criterion {number} ({label}) failed: {result.details}"


def test_criterion_1_even_capacity_is_one_bit():
    _run(1, "even capacity", checks.check_even_capacity())


def test_criterion_2_odd_capacity_exceeds_one_bit():
    _run(2, "odd capacity", checks.check_odd_capacity())


def test_criterion_3_vertex_census():
    _run(3, "capped-channel vertices", checks.check_vertices())


def test_criterion_4_binary_channel_decomposition():
    _run(4, "binary decomposition", checks.check_decomposition())


def test_criterion_5_alphabet_reduction():
    _run(5, "alphabet reduction", checks.check_reduction())


def test_criterion_6_random_access_protocol():
    result = checks.check_ic()
    _run(6, "two-bit random access", result)
    # the search agrees with the protocol at n=4 and 6 and strictly
    # beats it from n=8 on; pin the n=8 optimum
    _, _, best = best_ic_encoding(Theory(8))
    assert best == pytest.approx(1.127570660143532, abs=1e-12)
    assert best > run_ic(Theory(8)).info_sum_bits + 1e-3


def test_criterion_7_not_equal_witness():
    _run(7, "NOT-EQUAL witness", checks.check_ne())


def test_criterion_8_classical_simulation():
    _run(8, "classical simulation", checks.check_simulation())


def test_criterion_9_closed_form_weights():
    _run(9, "closed-form weights", checks.check_weights())
