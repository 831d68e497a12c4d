import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftaut.errors import ContractViolation, NotAdmissible, SupportError
from shiftaut.groups import FreeGroup, Integers, ball
from shiftaut.marker import (
    FeasibilityConstants,
    MarkerProblem,
    complete_marker,
    feasibility_conditions,
    marker_mask,
    minimal_radius,
    non_marker_fraction,
    search_marker,
    verify_marker,
)
from shiftaut.pattern import Pattern, is_g_overlapping
from shiftaut.subshift import LanguageOracle, full_shift, golden_mean

Z = Integers()
FULL2 = LanguageOracle(full_shift(Z, (0, 1)))


def brute_is_marker(p: Pattern, Y, W):
    diffs = {w - y for w in W for y in Y}
    return all(not is_g_overlapping(p, g) for g in diffs if g != 0)


@given(st.lists(st.integers(0, 1), min_size=6, max_size=6))
def test_kernel_mask_matches_definition(vals):
    problem = MarkerProblem(FULL2, [0], ball(Z, 3))
    p = Pattern.from_values(Z, problem.support, vals)
    mask = marker_mask(problem, np.array([vals], dtype=np.int32))[0]
    assert bool(mask) == brute_is_marker(p, [0], ball(Z, 3)) == verify_marker(problem, p).passed


def test_certificate_revalidates():
    problem = MarkerProblem(FULL2, [0], ball(Z, 2))
    res = search_marker(problem)
    assert res.found is not None and res.certificate.revalidate()
    assert res.found.values == (0, 0, 1, 0)


def test_no_marker_at_radius_one():
    res = search_marker(MarkerProblem(FULL2, [0], ball(Z, 1)))
    assert res.found is None and res.exhaustive and res.verdict == "fail"


def test_random_search_is_inconclusive_on_miss():
    res = search_marker(MarkerProblem(FULL2, [0], ball(Z, 1)), "random", trials=50)
    assert res.verdict == "inconclusive"


def test_search_respects_language():
    oracle = LanguageOracle(golden_mean())
    problem = MarkerProblem(oracle, [0], ball(Z, 3))
    res = search_marker(problem)
    assert res.found is not None and oracle.contains(res.found)


def test_verify_rejects_bad_support_and_language():
    problem = MarkerProblem(LanguageOracle(golden_mean()), [0], ball(Z, 2))
    with pytest.raises(SupportError):
        verify_marker(problem, Pattern(Z, {1: 0}))
    with pytest.raises(NotAdmissible):
        verify_marker(problem, Pattern.from_values(Z, problem.support, [1, 1, 0, 0]))


@pytest.mark.parametrize("q_centre", [0, 1])
def test_completion_stays_marker(q_centre):
    W = ball(Z, 3)
    problem = MarkerProblem(FULL2, [-1, 0], W)
    p = search_marker(problem).found
    q = Pattern(Z, {**p.cells, -1: q_centre})
    assert complete_marker(problem, p, [0], q).passed


def test_completion_of_non_marker_raises():
    problem = MarkerProblem(FULL2, [0], ball(Z, 2))
    p = Pattern.from_values(Z, problem.support, [0, 0, 0, 0])
    with pytest.raises(ContractViolation):
        complete_marker(problem, p, [0], p)


def test_markers_on_free_group():
    F2 = FreeGroup(2)
    oracle = LanguageOracle(full_shift(F2, (0, 1)))
    problem = MarkerProblem(oracle, [F2.identity], ball(F2, 2))
    res = search_marker(problem, "random", trials=2000, seed=1)
    assert res.found is not None
    assert verify_marker(problem, res.found).passed


def test_non_marker_fraction_bounds():
    problem = MarkerProblem(FULL2, [0], ball(Z, 2))
    # exactly 6 of the 16 patterns are markers
    assert non_marker_fraction(problem, 4000, seed=3) == pytest.approx(10 / 16, abs=0.03)


def test_feasibility_arithmetic_full_shift():
    oracle = FULL2
    assert minimal_radius(oracle, [0], 1, 30) == 5
    assert minimal_radius(oracle, [0], 1, 30, "condition3") == 19
    assert feasibility_conditions(oracle, [0], 1, 19).passed


def test_feasibility_arithmetic_golden():
    oracle = LanguageOracle(golden_mean())
    # |B(38r)| = 76r+1 against |L_{B(r-1)}| = Fib(2r+1); 533 < 610 first at r = 7
    assert minimal_radius(oracle, ball(Z, 1), 1, 30) == 7
    rep = feasibility_conditions(oracle, ball(Z, 1), 1, 19)
    assert rep.values["condition3_rhs"] == 16 * 7 + 2
    assert not rep.values["condition3"]


def test_feasibility_constants_are_parameters():
    oracle = LanguageOracle(golden_mean())
    loose = FeasibilityConstants(k_factor=1, k_offset=0)
    assert minimal_radius(oracle, ball(Z, 1), 1, 30, "condition3", constants=loose) == 8


def test_lex_order_first_marker_brute():
    problem = MarkerProblem(FULL2, [0], ball(Z, 2))
    first = next(v for v in itertools.product((0, 1), repeat=4)
                 if brute_is_marker(Pattern.from_values(Z, problem.support, v), [0], ball(Z, 2)))
    assert search_marker(problem).found.values == first
