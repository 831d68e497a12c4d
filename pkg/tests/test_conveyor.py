import json
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftaut.automorphism import compose, equals_on_language, identity_rule, symbol_permutation, tau
from shiftaut.conveyor import (
    BOTTOM,
    TOP,
    BeltState,
    EggBelt,
    ToyBelt,
    ToyView,
    belt_step,
    egg_view,
    fat_free_group,
    injectivity_witness,
    inverse_step,
    orbit_classify,
    plant_eggs,
    psi_egg,
    psi_toy,
    psi_toy_reference,
    straight_belt,
    toy_step_arrays,
    trace,
)
from shiftaut.errors import SupportError, WindowEdge
from shiftaut.fixtures import full_shift_eggs, toy_belt, track_rules
from shiftaut.groups import FreeGroup, Integers, ball
from shiftaut.pattern import Pattern, translate

from conftest import DATA

Z = Integers()
BELT = toy_belt()

belt_windows = st.integers(1, 64).flatmap(
    lambda n: st.lists(st.integers(0, len(BELT.alphabet) - 1), min_size=n, max_size=n)
).map(lambda v: Pattern.from_values(Z, range(len(v)), v))


def states(w):
    return [BeltState.of(c, t) for c in w.support for t in (TOP, BOTTOM)]


def step_or_none(view, s, inverse=False):
    try:
        return belt_step(view, s, inverse=inverse)
    except WindowEdge:
        return None


@given(belt_windows)
def test_step_and_inverse_are_mutually_inverse(w):
    view = ToyView(BELT, w)
    images = set()
    for s in states(w):
        n = step_or_none(view, s)
        if n is None:
            continue
        back = step_or_none(view, n, inverse=True)
        assert back == s
        images.add(n)
        p = step_or_none(view, s, inverse=True)
        if p is not None:
            assert step_or_none(view, p) == s
    # injective where defined
    assert len(images) == sum(step_or_none(view, s) is not None for s in states(w))


@given(belt_windows)
def test_kernel_steps_match_python(w):
    cells = list(w.support)
    codes = BELT.arrays()["code"][np.array([w.values], dtype=np.int32)]
    nxt, prv = toy_step_arrays(BELT, codes, cells)
    view = ToyView(BELT, w)
    for i, s in enumerate(states(w)):
        n = step_or_none(view, s)
        assert nxt[0, i] == (-1 if n is None else 2 * cells.index(n.position) + n.track[0])
        p = step_or_none(view, s, inverse=True)
        assert prv[0, i] == (-1 if p is None else 2 * cells.index(p.position) + p.track[0])


def trace_outcome(view, c, t):
    try:
        return trace(view, c, t, ball(Z, 2))
    except (WindowEdge, SupportError) as exc:
        return type(exc)


@given(belt_windows, st.integers(-20, 20))
def test_trace_equivariant(w, g):
    # starting on a non-belt cell or running off the window fails the same way in both frames
    view, moved = ToyView(BELT, w), ToyView(BELT, translate(g, w))
    c = len(w) // 2
    for t in (TOP, BOTTOM):
        a = trace_outcome(view, c, t)
        b = trace_outcome(moved, c + g, t)
        if isinstance(a, Pattern):
            assert b == a
        else:
            assert b is a


@given(belt_windows, st.sampled_from(sorted(track_rules())))
def test_psi_matches_reference(w, name):
    phi = track_rules()[name]
    rule = psi_toy(phi, BELT)
    fast = rule.forward.apply(w) if hasattr(rule, "forward") else rule.apply(w)
    assert fast == psi_toy_reference(phi, BELT, w)


def test_psi_identity_and_homomorphism():
    rules = track_rules()
    assert equals_on_language(psi_toy(rules["id"], BELT), identity_rule(Z, BELT.alphabet)).equal
    lhs = psi_toy(compose(rules["flip"], rules["sigma"]), BELT)
    rhs = compose(psi_toy(rules["flip"], BELT), psi_toy(rules["sigma"], BELT), tabulate=False)
    assert equals_on_language(lhs, rhs).equal


def test_injectivity_witness_separates():
    rules = track_rules()
    w, anchor, _ = injectivity_witness(rules["flip"], rules["flip.sigma"], BELT)
    assert psi_toy(rules["flip"], BELT).apply(w)[anchor] != psi_toy(rules["flip.sigma"], BELT).apply(w)[anchor]
    assert injectivity_witness(rules["flip"], rules["flip"], BELT) is None


def test_straight_belt_orbits():
    w = straight_belt(BELT, range(-3, 4), [0] * 7, [1] * 7)
    view = ToyView(BELT, w)
    orbit = orbit_classify(view, BeltState.of(0, TOP))
    assert orbit.kind == "exceeds-window"
    # cap both ends with non-belt cells: the chain becomes a segment of 14 states
    capped = Pattern(Z, {**w.cells, -4: BELT.n_belt, 4: BELT.n_belt})
    seg = orbit_classify(ToyView(BELT, capped), BeltState.of(0, TOP))
    assert seg.label() == "segment(14)"


def test_rays():
    w = straight_belt(BELT, range(0, 6), [0] * 6, [0] * 6)
    capped = Pattern(Z, {**w.cells, -1: BELT.n_belt})
    o = orbit_classify(ToyView(BELT, capped), BeltState.of(2, TOP))
    assert o.kind == "ray-backstop"
    capped = Pattern(Z, {**w.cells, 6: BELT.n_belt})
    o = orbit_classify(ToyView(BELT, capped), BeltState.of(2, TOP))
    assert o.kind == "ray-frontstop"


def test_cycle_on_finite_group():
    from shiftaut.groups import cyclic_group

    C5 = cyclic_group(5)
    belt = ToyBelt(C5, (1, 4), (0, 1))
    w = straight_belt(belt, [0, 1, 2, 3, 4], [0] * 5, [1] * 5)
    o = orbit_classify(ToyView(belt, w), BeltState.of(0, TOP))
    assert o.label() == "cycle(5)"


def test_non_belt_cell_turns_in_place():
    w = Pattern(Z, {0: BELT.n_belt})
    o = orbit_classify(ToyView(BELT, w), BeltState.of(0, TOP))
    assert o.label() == "segment(2)"


def test_belt_json_round_trip():
    with open(os.path.join(DATA, "toy_belt.json")) as fh:
        doc = json.load(fh)
    belt = ToyBelt.from_json(doc)
    assert belt == BELT and ToyBelt.from_json(belt.to_json()) == belt


def test_egg_belt_rotates_tracks_on_integers():
    E = full_shift_eggs(4)
    belt = EggBelt(E, 1, (0, 1), gammas=(5,))
    sites = {5 * j: j for j in range(4)}
    w = plant_eggs(belt, sites, 0, range(-2, 18))
    words = {h: belt.decode(i)[1] for h, i in sites.items()}
    yolk_index = {y[0]: i for i, y in enumerate(E.yolks)}

    def word_at(out, h):
        return belt.decode(yolk_index[out[h]])[1]

    sigma = tau(Z, (0, 1), -1)
    out = psi_egg(sigma, belt).apply(w)
    # the interior sites have both belt neighbours: top moves forward, bottom moves backward
    for h in (5, 10):
        assert word_at(out, h) == (words[h - 5][0], words[h + 5][1])
    flip = symbol_permutation(Z, (0, 1), [1, 0])
    out = psi_egg(flip, belt).apply(w)
    for h in (0, 5, 10, 15):
        assert word_at(out, h) == tuple(1 - a for a in words[h])
    # white cells are untouched
    assert all(out[c] == w[c] for c in out.support if c % 5)


def test_egg_view_pointers():
    E = full_shift_eggs(4)
    belt = EggBelt(E, 1, (0, 1), gammas=(5,))
    w = plant_eggs(belt, {0: 1, 5: 2}, 0, range(-2, 8))
    view = egg_view(belt, w)
    assert view.pointers(0) == (-5, 5)
    assert view.symbol(0, (TOP,)) == belt.decode(1)[1][0]


def test_fat_free_spacing():
    F = FreeGroup(2)
    res = fat_free_group(F, ball(F, 1), [(1,), (2,)], cap=4)
    assert res.n0 == 3 and res.disjoint and res.conclusive
    narrow = fat_free_group(F, ball(F, 1), [(1,), (2,)], cap=2)
    assert not narrow.conclusive
