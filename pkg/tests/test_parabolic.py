from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zipstrata.parabolic import (
    NotARepresentative,
    bruhat_leq,
    bruhat_order_by_reflections,
    double_coset,
    max_length_in_fiber,
    min_coset_reps,
    min_double_coset_reps,
    project_double,
    project_left,
    reflections,
)
from zipstrata.rootdata import build

from oracles import (
    POSITIVE_ROOTS,
    all_subsets,
    inversions,
    perm_of_word,
    tableau_leq,
)


def test_a2_coset_reps():
    _, W = build("A2")
    reps = min_coset_reps(W, [0])
    assert [w.word for w in reps] == [(), (1,), (1, 0)]


def test_reflection_count():
    for label in ["A3", "B3", "G2"]:
        _, W = build(label)
        assert len(reflections(W)) == POSITIVE_ROOTS[label]


@pytest.mark.parametrize("label", ["A2", "B2", "A3"])
def test_projection_lands_in_coset(label):
    _, W = build(label)
    for J in all_subsets(W.rank):
        WJ = W.subgroup(J)
        for w in W.elements():
            u = project_left(w, J)
            assert not (u.left_descents() & set(J))
            assert u in {W.compose(y, w) for y in WJ}


def test_bruhat_matches_permutation_tableaux():
    _, W = build("A3")
    els = W.elements()
    perms = {w: perm_of_word(w.word, 4) for w in els}
    for w in els:
        assert inversions(perms[w]) == w.length
    for u, w in product(els, els):
        assert bruhat_leq(u, w) == tableau_leq(perms[u], perms[w])


def test_reflection_closure_is_partial_order():
    _, W = build("B2")
    below = bruhat_order_by_reflections(W)
    for w in W.elements():
        assert w in below[w]
        for u in below[w]:
            assert below[u] <= below[w]


def test_double_coset_partition():
    _, W = build("B3")
    J, K = [0, 1], [1, 2]
    table = min_double_coset_reps(W, J, K)
    seen = set()
    for x in table.reps:
        cell = double_coset(x, J, K)
        assert x == min(cell, key=lambda w: w.sort_key())
        assert not cell & seen
        seen |= cell
        for w in cell:
            assert project_double(w, J, K) == x
    assert len(seen) == W.order


def test_fiber_rejects_non_representative():
    _, W = build("A2")
    table = min_double_coset_reps(W, [0], [0])
    with pytest.raises(NotARepresentative):
        table.fiber(W.s(0))


def test_max_length_in_fiber_standalone():
    _, W = build("C2")
    table = min_double_coset_reps(W, [0], [0])
    for x in table.reps:
        assert max_length_in_fiber(x, [0], [0]) == table.max_length_in_fiber(x)


_A3 = build("A3")[1]


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8), st.sets(st.integers(0, 2)))
def test_left_projection_is_shortest(word, J):
    W = _A3
    w = W.from_word(word)
    u = project_left(w, J)
    coset = [W.compose(y, w) for y in W.subgroup(J)]
    assert u.length == min(c.length for c in coset)
    # w = y u with lengths adding up
    y = W.compose(w, W.inverse(u))
    assert y.length + u.length == w.length


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8), st.integers(0, 2))
def test_bruhat_subword_property(word, i):
    W = _A3
    w = W.from_word(word)
    # deleting a letter from a reduced word gives something below
    red = w.word
    if red:
        k = i % len(red)
        u = W.from_word(red[:k] + red[k + 1:])
        assert bruhat_leq(u, w)
    # lifting property: s w > w implies w <= s w
    s = W.s(i)
    sw = W.compose(s, w)
    if sw.length > w.length:
        assert bruhat_leq(w, sw)
        assert not bruhat_leq(sw, w)
