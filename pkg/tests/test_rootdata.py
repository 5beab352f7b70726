import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zipstrata.rootdata import (
    CartanSpec,
    EnumerationTooLarge,
    MalformedCartan,
    MixedRootSystems,
    NotFiniteType,
    RootDataError,
    WeylGroup,
    build,
    cartan_matrix,
)

from oracles import POSITIVE_ROOTS, WEYL_ORDERS, reflection_group_order


@pytest.mark.parametrize("label", sorted(WEYL_ORDERS))
def test_group_order_and_roots(label):
    R, W = build(label)
    assert W.order == WEYL_ORDERS[label]
    assert W.order == reflection_group_order(cartan_matrix(label), range(W.rank))
    assert sum(R.is_positive(k) for k in range(len(R.roots))) == POSITIVE_ROOTS[label]
    assert W.longest_element().length == POSITIVE_ROOTS[label]


def test_cartan_convention_b2_vs_c2():
    # row i lists <alpha_i^vee, alpha_j>; B2 and C2 are transposes
    b, c = cartan_matrix("B2"), cartan_matrix("C2")
    assert b != c
    assert tuple(zip(*b)) == c


def test_reducible_label():
    _, W = build("A1xA2")
    assert W.rank == 3
    assert W.order == 12


@pytest.mark.parametrize(
    "entries",
    [
        [[2, -1], [-1]],
        [[1, -1], [-1, 2]],
        [[2, 1], [-1, 2]],
        [[2, 0], [-1, 2]],
    ],
)
def test_malformed_cartan(entries):
    with pytest.raises(MalformedCartan):
        CartanSpec(tuple(tuple(r) for r in entries))


def test_bad_label():
    with pytest.raises(MalformedCartan):
        cartan_matrix("Q7")


def test_affine_type_rejected():
    affine = ((2, -2), (-2, 2))
    with pytest.raises(NotFiniteType):
        build(CartanSpec(affine))


def test_cap_enforced():
    with pytest.raises(EnumerationTooLarge):
        build("A4", cap=50)[1].elements()


def test_automorphism_must_preserve_matrix():
    with pytest.raises(MalformedCartan):
        CartanSpec.from_label("B2", automorphism=(1, 0))
    spec = CartanSpec.from_label("A3", automorphism=(2, 1, 0))
    assert spec.automorphism == (2, 1, 0)


def test_node_out_of_range():
    _, W = build("A2")
    with pytest.raises(RootDataError):
        W.from_word([2])


def test_mixed_groups():
    _, W1 = build("A2")
    _, W2 = build("A2")
    with pytest.raises(MixedRootSystems):
        W1.compose(W1.s(0), W2.s(0))


def test_words_and_formatting():
    _, W = build("A2")
    w = W.from_word([1, 0, 1])
    assert w == W.from_word([0, 1, 0]) == W.longest_element()
    assert w.word == (0, 1, 0)
    assert W.format_word(w.word) == "s0s1s0"
    assert W.parse_word("s0s1s0") == w
    assert W.parse_word("e").is_identity()


def test_compose_order():
    _, W = build("A2")
    s0, s1 = W.s(0), W.s(1)
    assert W.compose(s0, s1) == W.from_word([0, 1])
    assert (s0 * s1).word == (0, 1)


def test_descents():
    _, W = build("A2")
    w = W.from_word([0, 1])
    assert w.left_descents() == {0}
    assert w.right_descents() == {1}
    assert W.descents(w, "left") == {0}
    with pytest.raises(ValueError):
        W.descents(w, "middle")


def test_longest_parabolic():
    _, W = build("B3")
    assert W.longest_element([0, 1]).length == 3
    assert W.longest_element([1, 2]).length == 4
    assert len(W.subgroup([1, 2])) == 8


def test_opposition_involution():
    for label, expect in [("A3", (2, 1, 0)), ("D4", (0, 1, 2, 3)), ("B2", (0, 1))]:
        _, W = build(label)
        assert tuple(W.opposition()) == expect


@pytest.mark.parametrize("label", ["A3", "B3", "G2"])
def test_elements_sorted_by_length_then_word(label):
    _, W = build(label)
    els = W.elements()
    keys = [w.sort_key() for w in els]
    assert keys == sorted(keys)
    assert len(set(els)) == W.order


def _group_and_words(label):
    _, W = build(label)
    word = st.lists(st.integers(0, W.rank - 1), max_size=12)
    return W, word


_B3, _B3_WORD = _group_and_words("B3")


@settings(max_examples=150, deadline=None)
@given(_B3_WORD, _B3_WORD)
def test_length_and_inverse_properties(a, b):
    W = _B3
    u, v = W.from_word(a), W.from_word(b)
    uv = W.compose(u, v)
    assert uv.length <= u.length + v.length
    assert (uv.length - u.length - v.length) % 2 == 0
    assert W.inverse(uv) == W.compose(W.inverse(v), W.inverse(u))
    assert W.inverse(u).length == u.length
    assert W.from_word(u.word) == u
    assert len(u.word) == u.length


@settings(max_examples=100, deadline=None)
@given(_B3_WORD)
def test_canonical_word_is_lex_least_reduced(a):
    W = _B3
    u = W.from_word(a)
    word = u.word
    # no shorter prefix swap gives a lexicographically smaller reduced word
    for i in range(W.rank):
        if i in u.left_descents() and word:
            assert word[0] <= i
    for d in u.left_descents():
        assert W.compose(W.s(d), u).length == u.length - 1
