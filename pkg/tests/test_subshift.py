import itertools

import pytest
from hypothesis import given, strategies as st

from shiftaut.groups import FreeGroup, Integers, Lattice, ball
from shiftaut.pattern import Pattern
from shiftaut.subshift import (
    LanguageOracle,
    boundary_sft,
    check_strong_irreducibility,
    check_strong_tmp,
    fix_subgroup,
    full_shift,
    golden_mean,
    language_growth_check,
    locally_admissible,
    sft,
    spec_from_json,
)

Z = Integers()


def fib(n):
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def brute_golden(support):
    s = set(support)
    return sum(
        1
        for vals in itertools.product((0, 1), repeat=len(support))
        if not any(v and (c + 1) in s and dict(zip(support, vals))[c + 1] for c, v in zip(support, vals))
    )


@pytest.mark.parametrize("n", range(1, 10))
def test_golden_mean_interval_counts(n):
    oracle = LanguageOracle(golden_mean())
    assert oracle.count(range(n)) == fib(n + 1) == brute_golden(list(range(n)))


@given(st.sets(st.integers(-4, 4), min_size=1, max_size=6))
def test_golden_mean_gapped_supports(F):
    # an SFT on Z with memory 2 extends every locally admissible gapped pattern
    F = sorted(F)
    assert LanguageOracle(golden_mean()).count(F) == brute_golden(F)


def test_full_shift_count_free_group():
    F2 = FreeGroup(2)
    oracle = LanguageOracle(full_shift(F2, (0, 1, 2)))
    assert oracle.count(ball(F2, 1)) == 3**5


def test_golden_mean_lattice_ball():
    Z2 = Lattice(2)
    oracle = LanguageOracle(golden_mean(Z2, step=(1, 0)))
    # rows of B(1): {(-1,0),(0,0),(1,0)} carry the constraint, (0,±1) are free
    assert oracle.count(ball(Z2, 1)) == 5 * 4


def test_local_admissibility():
    spec = golden_mean()
    assert locally_admissible(spec, Pattern(Z, {0: 1, 2: 1}))
    assert not locally_admissible(spec, Pattern(Z, {0: 1, 1: 1}))


def test_strong_irreducibility_golden_mean():
    oracle = LanguageOracle(golden_mean())
    good = check_strong_irreducibility(oracle, ball(Z, 1), size_cap=2, radius=2)
    assert good.passed
    bad = check_strong_irreducibility(oracle, [0], size_cap=2, radius=2)
    assert not bad.passed
    S, T, p, q = bad.raw
    assert not LanguageOracle(golden_mean()).contains(Pattern(Z, {**p.cells, **q.cells}))


def test_strong_tmp_full_and_golden():
    assert check_strong_tmp(LanguageOracle(full_shift(Z, (0, 1))), [0], size_cap=2).passed
    assert check_strong_tmp(LanguageOracle(golden_mean()), ball(Z, 1), size_cap=2).passed


def test_growth_bound():
    oracle = LanguageOracle(golden_mean())
    assert language_growth_check(oracle, ball(Z, 1), range(8)).passed


def test_fix_trivial_for_full_shift():
    assert fix_subgroup(full_shift(Z, (0, 1))).elements == (0,)


def test_subshift_json_round_trip():
    spec = golden_mean(K=ball(Z, 1))
    again = spec_from_json(spec.to_json())
    assert LanguageOracle(again).count(range(6)) == LanguageOracle(spec).count(range(6))


def test_boundary_fixture_symbols():
    spec = boundary_sft()
    assert len(spec.alphabet) == 4
    assert spec.kind == "sft"


def test_sft_with_no_forbidden_is_full():
    assert sft(Z, (0, 1), []).kind == "full"
