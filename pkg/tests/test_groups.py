import pytest
from hypothesis import given, strategies as st

from shiftaut.errors import GroupError
from shiftaut.groups import (
    DirectProduct,
    FreeGroup,
    Integers,
    Lattice,
    ball,
    cyclic_group,
    cyclic_embedding,
    group_from_json,
    inverse_set,
    is_k_disjoint,
    parse_subset,
    set_product,
    translate_set,
)

Z = Integers()
Z2 = Lattice(2)
F2 = FreeGroup(2)

free_words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6).map(lambda w: F2.prod(*[(x,) for x in w]))


@pytest.mark.parametrize(
    "group, sizes",
    [(Z, [1, 3, 5, 7]), (Z2, [1, 5, 13, 25]), (F2, [1, 5, 17, 53]), (cyclic_group(5), [1, 3, 5, 5])],
)
def test_ball_sizes(group, sizes):
    assert [group.ball_size(r) for r in range(4)] == sizes
    assert [len(ball(group, r)) for r in range(4)] == sizes


def test_direct_product_spheres_convolve():
    G = DirectProduct(Z, cyclic_group(2))
    assert [G.ball_size(r) for r in range(4)] == [len(ball(G, r)) for r in range(4)] == [1, 4, 8, 12]


@given(free_words, free_words, free_words)
def test_free_group_axioms(a, b, c):
    assert F2.mul(F2.mul(a, b), c) == F2.mul(a, F2.mul(b, c))
    assert F2.mul(a, F2.inv(a)) == F2.identity
    assert F2.word_length(a) == len(a)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_integer_word_length(a, b):
    assert Z.word_length(Z.mul(a, b)) == abs(a + b)


def test_set_operations():
    assert set(set_product(Z, [0, 1], [0, 10])) == {0, 1, 10, 11}
    assert set(inverse_set(Z, [1, 2])) == {-1, -2}
    assert set(translate_set(Z, 3, [0, 1])) == {3, 4}
    assert is_k_disjoint(Z, [[0], [3]], ball(Z, 1))
    assert not is_k_disjoint(Z, [[0], [1]], ball(Z, 1))


def test_free_json_round_trip():
    g = F2.prod((1,), (1,), (-2,))
    assert F2.element_to_json(g) == "aaB"
    assert F2.element_from_json("aaB") == g
    assert group_from_json(F2.to_json()) == F2


def test_parse_subset_forms():
    assert parse_subset(Z, "B(1)") == ball(Z, 1)
    assert set(parse_subset(Z, [0, 2])) == {0, 2}


def test_bad_generators_rejected():
    with pytest.raises(GroupError):
        Integers(generators=(2,))


def test_center():
    assert Z.is_central(5)
    assert not F2.is_central((1,))
    assert F2.is_central(F2.identity)


def test_cyclic_embedding_round_trip():
    emb = cyclic_embedding(F2, (1, 1))
    assert emb.forward(3) == (1,) * 6
    assert emb.backward((1,) * 4) == 2
