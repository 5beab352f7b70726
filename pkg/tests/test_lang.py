import numpy as np
import pytest

from zipstrata.finitezip import build_instance, fixed_points, lang_fiber_check, lang_map

from oracles import gl_order


@pytest.mark.parametrize("m", [2, 3])
def test_fibers_are_cosets_of_prime_points(m):
    inst = build_instance(2, 1, 2, m)
    rep = lang_fiber_check(inst)
    assert rep.passed
    assert rep.fiber_sizes == (gl_order(2, 2),)
    assert rep.image * 6 == rep.points == gl_order(2, 2**m)


def test_fixed_points_are_the_prime_field_group():
    inst = build_instance(2, 1, 2, 2)
    fixed = fixed_points(inst)
    assert len(fixed) == 6
    # entries 0 and 1 are the prime subfield in the table encoding
    prime = inst.G_points[np.all(inst.G_points < 2, axis=(1, 2))]
    assert set(inst.alg.encode(prime).tolist()) == set(inst.alg.encode(fixed).tolist())


def test_twisted_base_point():
    # x0 of order 3: the twisted form fixes a nonsplit torus of order 3
    inst = build_instance(2, 1, 2, 2)
    x0 = np.array([[0, 1], [1, 1]], dtype=np.uint8)
    rep = lang_fiber_check(inst, x0)
    assert rep.passed
    assert rep.fixed_order == 3
    assert rep.image * 3 == rep.points


def test_identity_maps_to_base_point():
    inst = build_instance(2, 1, 3, 2)
    x0 = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    codes, images = lang_map(inst, x0)
    one = inst.alg.encode(inst.alg.identity())
    k = int(np.nonzero(codes == one)[0][0])
    assert images[k] == inst.alg.encode(x0)


def test_higher_power_frobenius():
    inst = build_instance(2, 1, 2, 4)
    rep = lang_fiber_check(inst, power=2)
    assert rep.passed
    assert rep.fixed_order == gl_order(2, 4)
