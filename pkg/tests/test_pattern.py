import pytest
from hypothesis import given, strategies as st

from shiftaut.errors import PatternConflict, SupportError
from shiftaut.groups import FreeGroup, Integers, Lattice
from shiftaut.pattern import Pattern, concat, is_g_overlapping, is_subpattern, overlap_witness, restrict, translate

Z = Integers()
Z2 = Lattice(2)
F2 = FreeGroup(2)

z_patterns = st.dictionaries(st.integers(-6, 6), st.integers(0, 2), min_size=1, max_size=8).map(lambda d: Pattern(Z, d))
z2_cells = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
z2_patterns = st.dictionaries(z2_cells, st.integers(0, 1), min_size=1, max_size=8).map(lambda d: Pattern(Z2, d))
z2_shifts = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
free_elems = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4).map(lambda w: F2.prod(*[(x,) for x in w]))


def test_translate_value_convention():
    p = Pattern(Z, {0: "a", 1: "b"})
    q = translate(3, p)
    assert q.support == (3, 4)
    assert q[4] == p[1]


@given(z2_patterns, z2_shifts, z2_shifts)
def test_translate_composes(p, g, h):
    assert translate(g, translate(h, p)) == translate(Z2.mul(g, h), p)


@given(free_elems, free_elems)
def test_translate_composes_free(g, h):
    p = Pattern(F2, {F2.identity: 0, (1,): 1, (-2,): 2})
    assert translate(g, translate(h, p)) == translate(F2.mul(g, h), p)


@given(z_patterns, st.integers(-12, 12))
def test_overlap_symmetric(p, g):
    assert is_g_overlapping(p, g) == is_g_overlapping(p, -g)


@given(z2_patterns, z2_shifts)
def test_overlap_symmetric_lattice(p, g):
    assert is_g_overlapping(p, g) == is_g_overlapping(p, Z2.inv(g))


@given(z_patterns, st.integers(-12, 12))
def test_overlap_matches_translate(p, g):
    q = translate(g, p)
    common = set(p.support) & set(q.support)
    assert is_g_overlapping(p, g) == all(p[t] == q[t] for t in common)
    w = overlap_witness(p, g)
    if w is not None:
        assert p[w] != q[w]


def test_vacuous_overlap():
    p = Pattern(Z, {0: 1, 1: 0})
    assert is_g_overlapping(p, 5)


def test_concat_and_conflict():
    p = Pattern(Z, {0: 1})
    assert concat(p, Pattern(Z, {1: 0})) == Pattern(Z, {0: 1, 1: 0})
    assert concat(p, p) == p
    with pytest.raises(PatternConflict):
        concat(p, Pattern(Z, {0: 0}))


def test_restrict_and_subpattern():
    p = Pattern(Z, {0: 1, 1: 0, 2: 1})
    q = restrict(p, [0, 2])
    assert is_subpattern(q, p)
    assert not is_subpattern(Pattern(Z, {0: 0}), p)
    with pytest.raises(SupportError):
        restrict(p, [5])


def test_empty_pattern_equality():
    assert Pattern(Z, {}) == Pattern(Z, {})
    assert Pattern(Z, {}) != Pattern(Z, {0: 0})


def test_json_round_trip():
    p = Pattern(F2, {(1,): 1, (1, 1): 0})
    doc = p.to_json((0, 1))
    assert Pattern.from_json(F2, (0, 1), doc) == p
