import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftaut.automorphism import compose, equals_on_language, tables_equal, tau
from shiftaut.egg import (
    STAR,
    EggCollection,
    compose_perm,
    eta,
    exchange,
    lift_egg_automorphism,
    model_permutation,
    model_rule,
    phi_sigma,
    realizes,
    verify_egg_collection,
)
from shiftaut.errors import ContractViolation, SupportError
from shiftaut.fixtures import full_shift_eggs, golden_mean_eggs
from shiftaut.groups import Integers, ball
from shiftaut.pattern import Pattern, translate
from shiftaut.subshift import LanguageOracle, full_shift

Z = Integers()
E2 = full_shift_eggs(2)
E3 = full_shift_eggs(3)

bin_windows = st.lists(st.integers(0, 1), min_size=5, max_size=14).map(lambda v: Pattern.from_values(Z, range(len(v)), v))


def brute_eta(E, w):
    """Egg model by direct comparison with each egg translated to every site (0 is in W)."""
    out = {}
    for h in w.support:
        cells = [h + c for c in E.W]
        if not all(c in w.cells for c in cells):
            continue
        idx = [i for i, egg in enumerate(E.eggs) if all(w[h + c] == egg[c] for c in E.W)]
        out[h] = idx[0] if idx else STAR
    return Pattern(Z, out)


def test_fixture_shape():
    assert len(E2) == 2 and E2.white.values == (0, 0, 1, 0)
    assert E2.model_alphabet == (0, 1, STAR)


@given(bin_windows)
def test_eta_matches_brute(w):
    assert eta(E2, w) == brute_eta(E2, w)


@given(bin_windows, st.integers(-6, 6))
def test_eta_equivariant(w, g):
    assert eta(E2, translate(g, w)) == translate(g, eta(E2, w))


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_phi_sigma_homomorphism(s, t):
    lhs = phi_sigma(E3, compose_perm(s, t)).forward
    rhs = compose(phi_sigma(E3, s).forward, phi_sigma(E3, t).forward, tabulate=False)
    assert equals_on_language(lhs, rhs).equal


def test_phi_sigma_is_automorphism():
    assert phi_sigma(E3, (1, 2, 0)).verify().passed


def test_phi_sigma_commutes_with_shift():
    phi = phi_sigma(E2, (1, 0)).forward
    sh = tau(Z, E2.alphabet, 1)
    assert equals_on_language(compose(phi, sh, tabulate=False), compose(sh, phi, tabulate=False)).equal


def test_lift_of_permutation_is_phi_sigma():
    lifted = lift_egg_automorphism(E2, model_permutation(E2, (1, 0)))
    assert equals_on_language(lifted, phi_sigma(E2, (1, 0)).forward).equal


def test_lift_rejects_star_creation():
    # sends every egg symbol to the star
    bad = model_rule(E2, [0], lambda s: STAR)
    lifted = lift_egg_automorphism(E2, bad)
    w = Pattern.from_values(Z, range(5), E2.eggs[0].values)
    with pytest.raises(ContractViolation):
        lifted.apply(w)


def test_exchange_golden_mean_stays_admissible():
    oracle, E = golden_mean_eggs()
    assert verify_egg_collection(oracle, E, "strong-tmp").passed
    w = Pattern.from_values(Z, range(-3, 4), E.eggs[0].values)
    m = eta(E, w)
    assert m[0] == 0
    x = exchange(E, w, {0: 1})
    assert oracle.contains(x) and eta(E, x)[0] == 1


def test_full_shift_mode_requires_full_shift():
    oracle, E = golden_mean_eggs()
    with pytest.raises(SupportError):
        verify_egg_collection(oracle, E, "full-shift")


def test_declared_mode_is_labelled():
    oracle, E = golden_mean_eggs()
    rep = verify_egg_collection(oracle, E, "declared")
    assert rep.passed and rep.label == "assumed"


def test_realizes_yolk_restrictions():
    assert realizes(E3, [0]) == {Pattern(Z, {0: a}) for a in range(3)}
    with pytest.raises(SupportError):
        realizes(E3, [1])


def test_collection_validation():
    white = Pattern.from_values(Z, [-1, 1], [0, 1])
    with pytest.raises(SupportError):
        EggCollection(Z, (0, 1), [0], ball(Z, 1), white, [Pattern(Z, {0: 0}), Pattern(Z, {0: 0})])
    with pytest.raises(SupportError):
        EggCollection(Z, (0, 1), [0], ball(Z, 1), Pattern(Z, {1: 0}), [Pattern(Z, {0: 0})])


def test_json_round_trip():
    again = EggCollection.from_json(E3.to_json())
    assert again.eggs == E3.eggs and again.W == E3.W


def test_non_marker_white_fails_verification():
    oracle = LanguageOracle(full_shift(Z, (0, 1)))
    white = Pattern.from_values(Z, [-2, -1, 1, 2], [0, 0, 0, 0])
    E = EggCollection(Z, (0, 1), [0], ball(Z, 2), white, [Pattern(Z, {0: 0}), Pattern(Z, {0: 1})])
    assert not verify_egg_collection(oracle, E).passed
