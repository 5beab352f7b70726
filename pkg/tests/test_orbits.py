import numpy as np
import pytest

from zipstrata.finitezip import (
    NonStabilized,
    TowerTooShort,
    build_instance,
    dimension_estimate,
    geometric_orbit_count,
    signature,
    zip_orbits,
)
from zipstrata.finitezip.orbits import default_levels

from oracles import brute_zip_orbits

SMALL = [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 2, 2), (2, 0, 3), (2, 2, 2), (3, 0, 2)]


def _partition(table):
    inst = table.instance
    G = inst.G_points
    labels = table.orbit_of(G)
    groups = {}
    for g, k in zip(G, labels):
        groups.setdefault(int(k), set()).add(tuple(tuple(int(v) for v in r) for r in g))
    return {frozenset(s) for s in groups.values()}


@pytest.mark.parametrize("n,d,p", SMALL)
@pytest.mark.parametrize("quotient", [False, True])
def test_rational_orbits_match_brute_force(n, d, p, quotient):
    table = zip_orbits(build_instance(n, d, p), quotient=quotient)
    expect = set(brute_zip_orbits(n, d, p))
    assert _partition(table) == expect
    assert table.orbit_sizes.sum() == table.instance.order_G


def test_quotient_route_used_above_cap():
    inst = build_instance(3, 1, 2, 2, cap=10**5, lazy=True)
    table = zip_orbits(inst)
    assert table.quotient
    assert table.weight == inst.order_V
    assert table.orbit_sizes.sum() == inst.order_G


def test_representatives_are_least_nodes():
    table = zip_orbits(build_instance(3, 1, 2))
    alg = table.instance.alg
    for k in range(table.num_orbits):
        rep = table.representative(k)
        members = table.codes[table.orbit_of_node == k]
        assert alg.encode(rep) == members.min()


def test_point_not_in_table():
    table = zip_orbits(build_instance(2, 1, 2))
    with pytest.raises(ValueError):
        table.orbit_of(np.zeros((2, 2), dtype=np.uint8))


def test_tower_2_1_2(tower):
    t = tower(2, 1, 2, 4)
    assert t.counts_by_level == {1: 2, 2: 2, 3: 2, 4: 2}
    assert t.stabilized and t.certified
    assert t.num_classes == 2
    assert t.summary()["geometric_classes"] == 2


def test_tower_certified_before_stabilizing(tower):
    t = tower(2, 1, 3, 4)
    assert t.counts_by_level == {1: 6, 2: 3, 3: 3, 4: 2}
    assert not t.stabilized
    assert t.certified
    assert geometric_orbit_count(2, 1, 3, 4) == 2


def test_tower_3_1_2_short_is_not_settled(tower):
    t = tower(3, 1, 2, 2)
    assert t.num_classes == 4
    assert t.lower_bound == 3
    with pytest.raises(NonStabilized) as info:
        geometric_orbit_count(3, 1, 2, 2)
    assert info.value.tower.num_classes == 4


@pytest.mark.parametrize("d", [1, 2])
def test_tower_3_x_2_taller(tower, d):
    t = tower(3, d, 2, 3)
    assert t.num_classes == 3 and t.certified
    dims = sorted(dimension_estimate(t, c).estimate for c in range(3))
    assert dims == pytest.approx([7.0, 8.0, 9.0], abs=1e-9)


def test_split_torus_case(tower):
    # d = 0: the zip group is G acting by Frobenius conjugation, one geometric orbit
    t = tower(2, 0, 2, 3)
    assert t.num_classes == 1 and t.certified
    assert dimension_estimate(t, 0).estimate == pytest.approx(4.0)


def test_dimension_estimates_2_1_2(tower):
    t = tower(2, 1, 2, 4)
    est = sorted(dimension_estimate(t, c).estimate for c in range(2))
    assert est == pytest.approx([3.0, 4.0])
    anchor = [dimension_estimate(t, c, method="anchor") for c in range(2)]
    assert all(a.method == "anchor" and a.levels == (2, 4) for a in anchor)


def test_dimension_estimate_errors(tower):
    t = tower(2, 1, 2, 4)
    with pytest.raises(ValueError):
        dimension_estimate(t, 5)
    with pytest.raises(ValueError):
        dimension_estimate(t, 0, method="guess")
    with pytest.raises(ValueError):
        dimension_estimate(t, 0, method="anchor", levels=(3, 4))
    with pytest.raises(TowerTooShort):
        dimension_estimate(tower(2, 1, 2, 1), 0)
    with pytest.raises(TowerTooShort):
        geometric_orbit_count(2, 1, 2, 1)


def test_default_levels():
    assert default_levels(4) == (2, 4)
    assert default_levels(3) == (1, 3)
    assert default_levels(6) == (3, 6)


def test_signature_is_constant_on_orbits():
    inst = build_instance(3, 1, 2)
    table = zip_orbits(inst)
    labels = table.orbit_of(inst.G_points)
    for k in range(table.num_orbits):
        members = inst.G_points[labels == k]
        sigs = {signature(inst, g) for g in members[:: max(1, len(members) // 12)]}
        assert len(sigs) == 1
