import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftaut.automorphism import (
    LocalRule,
    bijective_on_periodic,
    center_test,
    compose,
    enumerate_automorphisms,
    equals_on_language,
    from_function,
    identity_rule,
    power,
    shift_automorphism,
    slow_shift,
    symbol_permutation,
    tables_equal,
    tau,
)
from shiftaut.groups import FreeGroup, Integers, Lattice, ball
from shiftaut.pattern import Pattern, translate
from shiftaut.subshift import LanguageOracle, golden_mean

Z = Integers()
F2 = FreeGroup(2)
A = (0, 1)

radius1_tables = st.lists(st.integers(0, 1), min_size=8, max_size=8).map(
    lambda t: LocalRule(Z, (-1, 0, 1), A, table=np.array(t, dtype=np.int32))
)
windows = st.lists(st.integers(0, 1), min_size=7, max_size=12).map(lambda v: Pattern.from_values(Z, range(len(v)), v))
free_elems = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3).map(lambda w: F2.prod(*[(x,) for x in w]))


def slow_apply(rule, w):
    """Cell-by-cell application straight from the memory definition."""
    out = {}
    for g in w.support:
        try:
            vals = [w[g + f] for f in rule.memory]
        except KeyError:
            continue
        code = 0
        for v in vals:
            code = code * rule.base + rule.in_alphabet.index(v)
        out[g] = rule.out_alphabet[rule.tabulate().table[code]]
    return Pattern(Z, out)


@given(radius1_tables, windows)
def test_apply_matches_definition(rule, w):
    assert rule.apply(w) == slow_apply(rule, w)


@given(radius1_tables, radius1_tables, windows)
def test_compose_is_sequential(outer, inner, w):
    both = compose(outer, inner)
    assert both.apply(w) == outer.apply(inner.apply(w))


@given(radius1_tables, windows, st.integers(-5, 5))
def test_rules_commute_with_translation(rule, w, g):
    assert rule.apply(translate(g, w)) == translate(g, rule.apply(w))


@given(free_elems, free_elems)
def test_tau_composition_free(g, h):
    lhs = compose(tau(F2, A, g), tau(F2, A, h))
    assert tables_equal(lhs, tau(F2, A, F2.mul(g, h)))


def test_tau_reads_right_translate():
    w = Pattern(F2, {F2.identity: 0, (1,): 1})
    out = tau(F2, A, (1,)).apply(w)
    assert out[F2.identity] == 1


def test_minimized_drops_dead_cells():
    rule = from_function(Z, (-1, 0, 1), A, lambda s: s[1])
    assert rule.minimized().memory == (0,)


def test_power_of_shift():
    assert tables_equal(power(tau(Z, A, 1), 3), tau(Z, A, 3))


def test_automorphism_verify():
    assert shift_automorphism(Z, A, 2).verify().passed
    flip = symbol_permutation(Z, A, [1, 0])
    assert tables_equal(compose(flip, flip), identity_rule(Z, A))


def test_enumeration_radius_one_is_exact():
    res = enumerate_automorphisms(A, 1)
    assert sorted(int(a.name[4:]) for a in res.automorphisms) == [15, 51, 85, 170, 204, 240]
    assert res.label == "exact"
    assert res.not_surjective + res.not_injective + len(res.automorphisms) == 256


def test_enumeration_radius_zero_three_symbols():
    res = enumerate_automorphisms((0, 1, 2), 0)
    assert len(res.automorphisms) == 6


def test_periodic_oracle_rejects_xor():
    xor = from_function(Z, (0, 1), A, lambda s: s[0] ^ s[1])
    assert not bijective_on_periodic(xor, 4)
    assert bijective_on_periodic(tau(Z, A, 1), 6)


def test_periodic_oracle_brute_radius_one():
    # bijective on every cyclic word up to length 6 iff among the six automorphisms
    good = set()
    for t in range(256):
        table = np.array([(t >> i) & 1 for i in range(8)], dtype=np.int32)
        rule = LocalRule(Z, (-1, 0, 1), A, table=table)
        ok = True
        for p in range(1, 7):
            imgs = set()
            for word in itertools.product(A, repeat=p):
                img = tuple(int(table[4 * word[(j - 1) % p] + 2 * word[j] + word[(j + 1) % p]]) for j in range(p))
                imgs.add(img)
            ok &= len(imgs) == 2**p
        assert ok == bijective_on_periodic(rule, 6)
        if ok:
            good.add(int(sum(int(v) << i for i, v in enumerate(table.tolist()))))
    assert good == {15, 51, 85, 170, 204, 240}


def test_slow_shift_root():
    for group, h in ((Z, 1), (F2, (1,)), (Lattice(2), (1, 0))):
        s = slow_shift(group, h, 2, 2)
        assert s.verify().passed
        assert tables_equal(power(s.forward, 2), tau(group, s.forward.in_alphabet, h))


def test_center_test_on_language():
    oracle = LanguageOracle(golden_mean())
    probes = [tau(Z, A, 1), tau(Z, A, -1)]
    assert center_test(tau(Z, A, 2), probes, oracle).passed
    flip = symbol_permutation(Z, A, [1, 0])
    assert not center_test(flip, [from_function(Z, (0, 1), A, lambda s: s[0] & s[1])]).passed


def test_equality_witness_is_a_real_difference():
    a, b = tau(Z, A, 1), tau(Z, A, 2)
    cmp = equals_on_language(a, b)
    assert not cmp.equal
    assert a.apply(cmp.witness)[0] != b.apply(cmp.witness)[0]


def test_json_round_trip():
    rule = from_function(Z, (0, 1), A, lambda s: s[0] ^ s[1], name="xor")
    again = LocalRule.from_json(None, rule.to_json())
    assert tables_equal(rule, again) and again.name == "xor"


def test_lattice_translate_invariance():
    Z2 = Lattice(2)
    rule = from_function(Z2, ball(Z2, 1), A, lambda s: sum(s) % 2)
    w = Pattern.from_values(Z2, ball(Z2, 3), [(x * 7 + 3) % 2 for x in range(len(ball(Z2, 3)))])
    g = (2, -1)
    assert rule.apply(translate(g, w)) == translate(g, rule.apply(w))
