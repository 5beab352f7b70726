import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zipstrata.parabolic import NotARepresentative, min_coset_reps
from zipstrata.rootdata import build
from zipstrata.zipcomb import (
    CombZipDatum,
    NotAMinimalRep,
    SigmaDoesNotPreserveJ,
    ZipDatumError,
    bruhat_strata,
    closure_poset,
    galois_orbits,
    monotonicity_check,
    purity_check,
    restrict_zip_datum,
    zip_datum_from_cocharacter,
    zip_leq,
)

from oracles import all_subsets, perm_of_word, type_a_zip_leq


def datum(label, J, **kw):
    return zip_datum_from_cocharacter(build(label)[1], J, **kw)


def test_siegel_c2_chain():
    poset = closure_poset(datum("C2", [0]))
    assert [w.word for w in poset.nodes] == [(), (1,), (1, 0), (1, 0, 1)]
    assert poset.dims == (0, 1, 2, 3)
    assert poset.edges == ((0, 1), (1, 2), (2, 3))
    assert purity_check(poset).passed


def test_twist_changes_psi_in_a3():
    # J = {0, 1}: int(w0) sends it to {1, 2}, the frame twist keeps it inside
    twisted = datum("A3", [0, 1])
    plain = datum("A3", [0, 1], twist=False)
    assert twisted.K == plain.K == frozenset({1, 2})
    assert dict(twisted.psi) == {0: 1, 1: 2}
    assert dict(plain.psi) == {0: 2, 1: 1}


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("twist", [True, False])
def test_type_a_against_permutations(n, twist):
    W = build(f"A{n - 1}")[1]
    for J in all_subsets(n - 1):
        d = zip_datum_from_cocharacter(W, J, twist=twist)
        reps = list(d.cosets)
        perms = {w: perm_of_word(w.word, n) for w in reps}
        for wp in reps:
            for w in reps:
                assert zip_leq(d, wp, w) == type_a_zip_leq(perms[wp], perms[w], J, d.psi, n)


def test_rejects_non_minimal():
    d = datum("A2", [0])
    with pytest.raises(NotAMinimalRep):
        zip_leq(d, d.group.s(0), d.group.s(1))


def test_rejects_bad_psi():
    W = build("B2")[1]
    with pytest.raises(ZipDatumError):
        CombZipDatum(W, [0], [0], {0: 1}, (0, 1))
    with pytest.raises(ZipDatumError):
        CombZipDatum(build("A2")[1], [0, 1], [0, 1], {0: 0, 1: 0}, (0, 1))
    with pytest.raises(ZipDatumError):
        CombZipDatum(W, [0], [0, 1], {0: 0}, (0, 1))


def test_galois_orbits_with_nontrivial_sigma():
    W = build("A3")[1]
    d = zip_datum_from_cocharacter(W, [1], sigma=(2, 1, 0))
    orbits = galois_orbits(d)
    assert sum(len(o) for o in orbits) == len(d.cosets)
    assert any(len(o) == 2 for o in orbits)
    assert all(len(o) == 1 for o in galois_orbits(d, degree=2))
    poset = closure_poset(d, with_galois=True)
    assert poset.galois_classes is not None


def test_sigma_must_preserve_J():
    W = build("A3")[1]
    d = zip_datum_from_cocharacter(W, [0], sigma=(2, 1, 0))
    with pytest.raises(SigmaDoesNotPreserveJ):
        galois_orbits(d)
    assert len(galois_orbits(d, degree=2)) == len(d.cosets)


def test_bruhat_strata_c2():
    d = datum("C2", [0])
    strata = bruhat_strata(d)
    assert [(x.word, dim) for x, dim in strata] == [((), 0), ((1,), 2), ((1, 0, 1), 3)]


def test_restricted_datum():
    d = datum("A3", [0, 2])
    for x in d.double_cosets:
        sub = restrict_zip_datum(d, x)
        assert sub.rank == len(d.K)
        assert set(sub.psi) == set(sub.J)
    with pytest.raises(NotARepresentative):
        restrict_zip_datum(d, d.group.s(0))


def test_monotonicity_report_shape():
    rep = monotonicity_check(datum("B3", [0, 1]))
    assert rep.passed
    assert rep.to_dict()["verdict"] == "PASS"


def test_datum_serialization():
    out = datum("C2", [0], q=3).to_dict()
    assert out == {"cartan": "C2", "rank": 2, "J": [0], "K": [0], "psi": {"0": 0}, "sigma": [0, 1], "q": 3}


_C3 = build("C3")[1]
_C3_DATUM = zip_datum_from_cocharacter(_C3, [0, 1])
_C3_REPS = list(min_coset_reps(_C3, [0, 1]))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(_C3_REPS), st.sampled_from(_C3_REPS), st.sampled_from(_C3_REPS))
def test_zip_order_axioms_sampled(a, b, c):
    d = _C3_DATUM
    assert zip_leq(d, a, a)
    if zip_leq(d, a, b) and zip_leq(d, b, a):
        assert a == b
    if zip_leq(d, a, b) and zip_leq(d, b, c):
        assert zip_leq(d, a, c)
    if zip_leq(d, a, b):
        assert a.length <= b.length
