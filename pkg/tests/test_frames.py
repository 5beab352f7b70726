import numpy as np
import pytest

from zipstrata.finitezip import (
    NoFrameFound,
    build_instance,
    datum_of,
    dimension_estimate,
    find_frame,
    find_frames,
    frame_axioms,
    match_representatives,
    stabilizer_growth,
    stabilizer_points,
)


def test_gl3_frame():
    inst = build_instance(3, 1, 2, lazy=True)
    frames = find_frames(inst)
    assert len(frames) == 1
    assert frames[0].g.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert frames[0].J == inst.J


@pytest.mark.parametrize("d,psi", [(1, {1: 0, 2: 1}), (3, {0: 1, 1: 2})])
def test_gl4_frame_induces_the_twisted_psi(d, psi):
    inst = build_instance(4, d, 2, lazy=True)
    frame = find_frame(inst)
    assert frame.psi == psi
    assert dict(datum_of(inst).psi) == psi
    assert dict(datum_of(inst, twist=False).psi) != psi


def test_identity_is_not_a_frame():
    inst = build_instance(3, 1, 2, 2, lazy=True)
    axioms = frame_axioms(inst, inst.alg.identity())
    assert axioms["borel_in_Q"]
    assert not all(axioms.values())


@pytest.mark.parametrize("d", [1, 2])
def test_labels_match_dimensions(tower, d):
    t = tower(3, d, 2, 3)
    lab = match_representatives(t)
    assert lab.psi_matches
    inst = t.levels[1].instance
    for c, w in lab.labels.items():
        est = dimension_estimate(t, c, expected=inst.dim_P + w.length)
        assert est.within()
    assert sorted(w.length for w in lab.labels.values()) == [0, 1, 2]


def test_labels_gl2(tower):
    t = tower(2, 1, 2, 4)
    lab = match_representatives(t)
    words = {c: w.word for c, w in lab.labels.items()}
    assert sorted(words.values()) == [(), (0,)]
    assert lab.class_of(lab.datum.group.s(0)) in lab.labels


def test_short_tower_has_no_labeling(tower):
    with pytest.raises(NoFrameFound):
        match_representatives(tower(3, 1, 2, 2))


def test_stabilizer_is_subgroup_of_predicted_order(tower):
    t = tower(3, 1, 2, 3)
    inst = t.levels[1].instance
    for c in range(t.num_classes):
        g = t.anchor(c)
        p, q = stabilizer_points(inst, g)
        assert np.all(inst.in_E((p, q)))
        assert np.all(inst.act((p, q), g) == g)
        rep = stabilizer_growth(t, g)
        assert rep.is_subgroup
        assert rep.orders[1] == len(p)
        assert rep.to_dict()["levels"] == [1, 3]
