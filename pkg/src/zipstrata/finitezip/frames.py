"""Frames of the ``GL_n`` zip datum and the labeling of orbits by ``^J W``.

The Borel is the lower triangular group ``B`` with diagonal torus ``T``.  A
frame element ``g`` must satisfy

* ``B ⊆ Q``;
* ``g B g^{-1} ⊆ P``;
* ``phi(g B g^{-1} ∩ L) ⊆ B``;
* ``phi(g T g^{-1}) = T``.

The last condition forces ``g`` to normalize ``T``, so the search runs over
monomial matrices with prime-field entries, in code order.  For monomial
``g`` the groups ``g B g^{-1} ∩ L`` are generated by ``T`` and root
subgroups, so checking generators is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from ..parabolic import min_coset_reps
from ..rootdata import WeylElement, WeylGroup, build
from ..zipcomb import CombZipDatum, zip_datum_from_cocharacter
from .instance import FiniteZipInstance, build_instance, weyl_matrix
from .orbits import OrbitTower, TowerTooShort, default_levels

__all__ = [
    "NoFrameFound",
    "FrameData",
    "Labeling",
    "StabilizerReport",
    "weyl_group_of",
    "datum_of",
    "frame_axioms",
    "frame_data",
    "frame_candidates",
    "find_frame",
    "find_frames",
    "match_representatives",
    "stabilizer_points",
    "stabilizer_growth",
]


class NoFrameFound(RuntimeError):
    pass


def weyl_group_of(n: int) -> WeylGroup:
    if n < 2:
        raise ValueError("the Weyl group of GL_1 has no simple reflections")
    return build(f"A{n - 1}")[1]


def datum_of(inst: FiniteZipInstance, twist: bool = True) -> CombZipDatum:
    """The combinatorial datum with the instance's ``J`` and ``q``."""
    return zip_datum_from_cocharacter(weyl_group_of(inst.n), inst.J, q=inst.field.q, twist=twist)


def _lower_borel_generators(inst: FiniteZipInstance) -> tuple[list[np.ndarray], list[np.ndarray]]:
    alg = inst.alg
    roots = [alg.elementary(i, j, 1) for i in range(inst.n) for j in range(i)]
    zeta = inst.field.generator
    torus = []
    for i in range(inst.n):
        diag = [1] * inst.n
        diag[i] = zeta
        torus.append(alg.diagonal(diag))
    return roots, torus


def _is_lower(x: np.ndarray) -> bool:
    return not np.any(np.triu(x, 1))


def _is_diagonal(x: np.ndarray) -> bool:
    return not np.any(x - np.diag(np.diag(x)))


def frame_axioms(inst: FiniteZipInstance, g: np.ndarray) -> dict[str, bool]:
    """Each frame condition, checked on generators of ``B`` over the instance field."""
    alg = inst.alg
    g = np.asarray(g, dtype=np.uint8)
    g_inv = alg.inv(g)
    roots, torus = _lower_borel_generators(inst)
    gens = roots + torus
    conj = [alg.product(g, b, g_inv) for b in gens]
    in_levi = [y for y in conj if inst.in_L(y)]
    return {
        "borel_in_Q": all(bool(inst.in_Q(b)) for b in gens),
        "conjugate_borel_in_P": all(bool(inst.in_P(y)) for y in conj),
        "levi_borel_to_borel": all(_is_lower(inst.phi(y)) for y in in_levi),
        "torus_to_torus": all(_is_diagonal(inst.phi(alg.product(g, t, g_inv))) for t in torus),
    }


def _simple_index(perm: tuple[int, ...]) -> int | None:
    moved = [i for i, j in enumerate(perm) if i != j]
    if len(moved) == 2 and moved[1] == moved[0] + 1:
        return moved[0]
    return None


def _permutation_of(x: np.ndarray) -> tuple[int, ...]:
    """``perm`` with ``x e_j`` a multiple of ``e_{perm[j]}``."""
    return tuple(int(np.nonzero(x[:, j])[0][0]) for j in range(x.shape[1]))


@dataclass(frozen=True)
class FrameData:
    """A frame element with the type and isomorphism it induces."""

    g: np.ndarray = field(repr=False)
    J: tuple[int, ...]
    psi: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "g": self.g.astype(int).tolist(),
            "J": list(self.J),
            "psi": {str(k): v for k, v in sorted(self.psi.items())},
        }


def frame_data(inst: FiniteZipInstance, g: np.ndarray) -> FrameData | None:
    """``J_g = {i : g s_i g^{-1} ∈ P}`` and ``psi(i)`` read off ``phi(g s_i g^{-1})``.

    Returns ``None`` when some image is not a simple reflection.
    """
    alg = inst.alg
    g = np.asarray(g, dtype=np.uint8)
    g_inv = alg.inv(g)
    W = weyl_group_of(inst.n)
    J, psi = [], {}
    for i in range(inst.n - 1):
        y = alg.product(g, weyl_matrix(alg, W.s(i)), g_inv)
        if not inst.in_P(y):
            continue
        k = _simple_index(_permutation_of(inst.phi(y)))
        if k is None:
            return None
        J.append(i)
        psi[i] = k
    return FrameData(g, tuple(J), psi)


def _check_field_instance(inst: FiniteZipInstance) -> FiniteZipInstance:
    """An instance over a field with a nontrivial torus, for the torus conditions."""
    if inst.s >= 3:
        return inst
    return build_instance(inst.n, inst.d, inst.field.p, 2, inst.field.q, lazy=True)


def frame_candidates(inst: FiniteZipInstance):
    """Monomial matrices over the prime field in increasing code order."""
    p, n = inst.field.p, inst.n
    alg = inst.alg
    mats = []
    for perm in permutations(range(n)):
        base = alg.permutation_matrix(perm)
        for scale in product(range(1, p), repeat=n):
            mats.append(alg.matmul(base, alg.diagonal(scale)))
    mats = np.stack(mats)
    order = np.argsort(alg.encode(mats), kind="stable")
    return mats[order]


def find_frames(inst: FiniteZipInstance) -> list[FrameData]:
    """All monomial frames of the instance's type, in code order."""
    check = _check_field_instance(inst)
    emb = inst.field.embedding_into(check.field)
    out = []
    for g in frame_candidates(inst):
        if not all(frame_axioms(check, emb[g]).values()):
            continue
        data = frame_data(inst, g)
        if data is not None and data.J == inst.J:
            out.append(data)
    return out


def find_frame(inst: FiniteZipInstance) -> FrameData:
    frames = find_frames(inst)
    if not frames:
        raise NoFrameFound(f"no monomial frame of type {inst.J} for n={inst.n}, d={inst.d}")
    return frames[0]


@dataclass(frozen=True)
class Labeling:
    """Anchored classes of a tower labeled by ``^J W`` through ``g w``."""

    frame: FrameData
    datum: CombZipDatum = field(repr=False)
    labels: dict[int, WeylElement]
    candidates_tried: int

    @property
    def psi_matches(self) -> bool:
        return dict(self.frame.psi) == dict(self.datum.psi)

    def class_of(self, w: WeylElement) -> int:
        return next(c for c, u in self.labels.items() if u == w)

    def to_dict(self) -> dict:
        W = self.datum.group
        return {
            "frame": self.frame.to_dict(),
            "psi_matches_datum": self.psi_matches,
            "labels": [
                {"class": c, "word": W.format_word(w.word), "length": w.length}
                for c, w in sorted(self.labels.items())
            ],
            "candidates_tried": self.candidates_tried,
        }


def match_representatives(tower: OrbitTower, datum: CombZipDatum | None = None) -> Labeling:
    """First frame ``g`` whose translates ``g w`` (``w ∈ ^J W``) meet every anchored class once.

    Raises :class:`NoFrameFound` when no frame works at this tower height,
    which is the case while the tower still has more classes than ``^J W``.
    """
    inst = tower.levels[1].instance
    datum = datum_of(inst) if datum is None else datum
    reps = list(min_coset_reps(datum.group, datum.J))
    tried = 0
    for frame in find_frames(inst):
        tried += 1
        points = np.stack([inst.alg.matmul(frame.g, weyl_matrix(inst.alg, w)) for w in reps])
        classes = [int(c) for c in tower.class_of_points(points, 1)]
        if len(set(classes)) == len(reps) == tower.num_classes:
            return Labeling(frame, datum, dict(zip(classes, reps)), tried)
    raise NoFrameFound(
        f"no frame maps ^J W ({len(reps)} elements) onto the {tower.num_classes} classes "
        f"at m <= {tower.m_max}; retry with a taller tower"
    )


# -- stabilizers ---------------------------------------------------------------


def stabilizer_points(inst: FiniteZipInstance, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``Stab_E(g)`` over the instance field as arrays ``(p, q)``.

    ``(p, q)`` fixes ``g`` exactly when ``q = g^{-1} p g``, so ``p`` runs over
    ``P`` and the pair is kept when that ``q`` completes it to a point of ``E``.
    """
    alg = inst.alg
    g = np.asarray(g, dtype=np.uint8)
    P = inst.P_points
    q = alg.product(alg.inv(g), P, g)
    keep = inst.in_E((P, q))
    return P[keep], q[keep]


def _check_subgroup(inst: FiniteZipInstance, pair: tuple[np.ndarray, np.ndarray]) -> bool:
    """Contains the identity and is closed under multiplication (finite, so a subgroup)."""
    alg = inst.alg

    def keys(p, q):
        return set(zip(alg.encode(p).tolist(), alg.encode(q).tolist()))

    p, q = pair
    elements = keys(p, q)
    one = alg.identity()[None]
    if not keys(one, one) <= elements:
        return False
    for a, b in zip(p, q):
        if not keys(alg.matmul(a, p), alg.matmul(b, q)) <= elements:
            return False
    return True


@dataclass(frozen=True)
class StabilizerReport:
    """Stabilizer orders of one point across levels and their growth exponent."""

    orders: dict[int, int]
    levels: tuple[int, int]
    exponent: float
    expected: int | None
    is_subgroup: bool

    def to_dict(self) -> dict:
        return {
            "orders": {str(m): o for m, o in sorted(self.orders.items())},
            "levels": list(self.levels),
            "exponent": round(self.exponent, 4),
            "expected": self.expected,
            "is_subgroup": self.is_subgroup,
        }


def stabilizer_growth(tower: OrbitTower, g: np.ndarray, expected: int | None = None,
                      levels: tuple[int, int] | None = None) -> StabilizerReport:
    """``|Stab_{E(F_s)}(g)|`` at every level, plus its growth between two levels.

    Orders come from ``|E| / |orbit|``; at the prime level the stabilizer is
    also enumerated and checked to be a subgroup of the predicted order.
    """
    if tower.m_max < 2:
        raise TowerTooShort("stabilizer growth needs two levels")
    orders = {}
    for m, table in tower.levels.items():
        orders[m] = table.instance.order_E // tower.orbit_size_of(g, m)
    base = tower.levels[1].instance
    pts = stabilizer_points(base, g)
    ok = len(pts[0]) == orders[1] and _check_subgroup(base, pts)
    m1, m2 = default_levels(tower.m_max) if levels is None else levels
    s1, s2 = tower.levels[m1].instance.s, tower.levels[m2].instance.s
    exponent = math.log(orders[m2] / orders[m1]) / math.log(s2 / s1)
    return StabilizerReport(orders, (m1, m2), exponent, expected, ok)
