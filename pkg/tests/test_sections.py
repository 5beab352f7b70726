import numpy as np
import pytest

from zipstrata.finitezip import (
    NotInIntersection,
    bruhat_cells,
    build_instance,
    e_x_map,
    f_x_section,
    kernel_check,
    section_check,
)


@pytest.fixture(scope="module", params=[1, 2])
def cells(request):
    return bruhat_cells(build_instance(3, request.param, 2))


def test_one_cell_per_double_coset(cells):
    assert len(cells) == 2


def test_intersection_and_group_orders(cells):
    for cell in cells:
        inter = cell.intersection_points
        assert np.all(cell.in_intersection(inter))
        p, q = cell.E_x_points
        assert np.all(cell.in_E_x((p, q)))
        assert np.all(cell.in_P_x(p)) and np.all(cell.in_Q_x(q))


def test_first_coordinate_and_radical(cells):
    for cell in cells:
        rep = section_check(cell)
        assert rep.up_to_radical
        assert rep.stabilizer_surjective


def test_literal_identity_holds_when_radical_trivial(cells):
    for cell in cells:
        rep = section_check(cell)
        if rep.unipotent_radical == 1:
            assert rep.literal and rep.on_stabilizers
        else:
            # every E_x point with a nontrivial R_uQ_x component is moved
            assert rep.fixed == rep.points // rep.unipotent_radical


def test_e_x_is_a_homomorphism(cells):
    for cell in cells:
        alg = cell.inst.alg
        inter = cell.intersection_points
        m, fl = e_x_map(cell, inter)
        for i in range(0, len(inter), max(1, len(inter) // 6)):
            prod = alg.matmul(inter[i], inter)
            m2, f2 = e_x_map(cell, prod)
            assert np.array_equal(m2, alg.matmul(m[i], m))
            assert np.array_equal(f2, alg.matmul(fl[i], fl))


def test_kernel_is_unipotent_shadow(cells):
    for cell in cells:
        rep = kernel_check(cell)
        assert rep.shadow_in_kernel and rep.equal


def test_domain_errors(cells):
    cell = cells[0]
    alg = cell.inst.alg
    bad = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=np.uint8)
    if not cell.in_intersection(bad):
        with pytest.raises(NotInIntersection):
            e_x_map(cell, bad)
    with pytest.raises(NotInIntersection):
        f_x_section(cell, (alg.identity(), bad))
