"""Rational ``E``-orbits, their merging along field extensions, and point-count exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .instance import FiniteZipInstance, build_instance
from .invariants import signature
from .matrices import ENUMERATION_CAP

__all__ = [
    "OrbitTable",
    "OrbitTower",
    "NonStabilized",
    "TowerTooShort",
    "DimensionEstimate",
    "zip_orbits",
    "orbit_tower",
    "geometric_orbit_count",
    "dimension_estimate",
    "default_levels",
    "DIMENSION_TOLERANCE",
    "InternalConsistencyError",
]

DIMENSION_TOLERANCE = 0.25


class NonStabilized(RuntimeError):
    def __init__(self, message: str, tower: "OrbitTower"):
        super().__init__(message)
        self.tower = tower


class TowerTooShort(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


@dataclass
class OrbitTable:
    """Orbits of ``E(F_s)`` on ``G(F_s)``, or of ``P(F_s)`` on ``G(F_s)/V(F_s)``.

    ``codes`` are the sorted node codes; ``labels[i]`` is the index of the
    lexicographically least node in the orbit of node ``i``.  ``weight`` is the
    number of points of ``G`` behind each node (``|V(F_s)|`` on the quotient).
    """

    instance: FiniteZipInstance = field(repr=False)
    codes: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    weight: int
    quotient: bool

    def __post_init__(self):
        reps, inverse, counts = np.unique(self.labels, return_inverse=True, return_counts=True)
        self.rep_indices = reps
        self.orbit_of_node = inverse
        self.node_counts = counts

    @property
    def num_orbits(self) -> int:
        return len(self.rep_indices)

    @property
    def orbit_sizes(self) -> np.ndarray:
        """Number of points of ``G(F_s)`` in each orbit."""
        return self.node_counts.astype(np.int64) * self.weight

    def representative(self, k: int) -> np.ndarray:
        """Lexicographically least node of orbit ``k``."""
        return self.instance.alg.decode(self.codes[self.rep_indices[k]])

    def orbit_of(self, g: np.ndarray) -> np.ndarray:
        """Orbit indices of a batch of group elements."""
        g = np.asarray(g, dtype=np.uint8).reshape(-1, self.instance.n, self.instance.n)
        if self.quotient:
            g = self.instance.v_canonical(g)
        c = self.instance.alg.encode(g)
        pos = np.searchsorted(self.codes, c)
        if np.any(pos >= len(self.codes)) or np.any(self.codes[np.minimum(pos, len(self.codes) - 1)] != c):
            raise ValueError("element is not a point of this table")
        return self.orbit_of_node[pos]


def _edges(inst: FiniteZipInstance, pts: np.ndarray, codes: np.ndarray, moves, split: int):
    f = inst.field
    src = np.arange(len(pts), dtype=np.int64)
    out_src, out_dst = [], []
    for left, right in moves:
        img = kernels.transform_codes(pts, left, right, split, f.add, f.mul, f.sub, f.inv, inst.alg.weights)
        dst = np.searchsorted(codes, img)
        if np.any(codes[np.minimum(dst, len(codes) - 1)] != img):
            raise RuntimeError("a generator moved a point outside the enumerated set")
        out_src.append(src)
        out_dst.append(dst)
    return np.concatenate(out_src), np.concatenate(out_dst)


def zip_orbits(inst: FiniteZipInstance, quotient: bool | None = None) -> OrbitTable:
    """Orbits of the rational zip group.

    With ``quotient`` the ``P``-orbits on ``G/V`` are computed instead; each
    is the image of exactly one ``E``-orbit.  By default the quotient is used
    whenever ``|G|`` exceeds the enumeration cap.
    """
    if quotient is None:
        quotient = inst.order_G > inst.cap and inst.proper
    alg = inst.alg
    one = alg.identity()
    if quotient and inst.proper:
        pts, codes = inst.quotient_points, inst.quotient_codes
        moves = [(u, None) for u in inst.U_generators]
        moves += [(ell, alg.inv(inst.phi(ell))) for ell in inst.L_generators]
        split, weight = inst.split, inst.order_V
    else:
        pts, codes = inst.G_points, inst.G_codes
        moves = [(u, None) for u in inst.U_generators]
        moves += [(None, alg.inv(v)) for v in inst.V_generators]
        moves += [(ell, alg.inv(inst.phi(ell))) for ell in inst.L_generators]
        split, weight, quotient = 0, 1, False
    moves = [(None if a is None or np.array_equal(a, one) else a, None if b is None or np.array_equal(b, one) else b)
             for a, b in moves]
    src, dst = _edges(inst, pts, codes, moves, split)
    labels = kernels.components(len(pts), src, dst)
    return OrbitTable(inst, codes, labels, weight, quotient)


# --------------------------------------------------------------------------
# Towers of extensions
# --------------------------------------------------------------------------

@dataclass
class OrbitTower:
    """Rational orbits over ``F_{p^m}`` for ``m = 1..m_max`` glued into geometric classes.

    Orbits at levels ``m | m'`` are joined when the image of one meets the
    other.  ``class_of[m][k]`` is the component of orbit ``k`` at level ``m``.
    Components containing an orbit of the prime level are *anchored*; they are
    numbered ``0..num_classes-1`` in order of their least prime-level orbit.
    Components made only of higher-level pieces get larger numbers: such a
    piece lies in some geometric orbit but has not met a prime-level point
    inside this tower.

    Merging only ever joins points of one geometric orbit, so the anchored
    count is an upper bound.  ``signature_of[m][k]`` numbers the invariant
    signature of each orbit; distinct signatures are distinct geometric
    orbits, so the number of signatures at the prime level is a lower bound.
    The count is *certified* when the two bounds meet.
    """

    n: int
    d: int
    p: int
    levels: dict[int, OrbitTable] = field(repr=False)
    class_of: dict[int, np.ndarray] = field(repr=False)
    counts_by_level: dict[int, int]
    num_classes: int
    num_components: int
    signature_of: dict[int, np.ndarray] = field(repr=False)
    lower_bound: int

    @property
    def m_max(self) -> int:
        return max(self.levels)

    @property
    def stabilized(self) -> bool:
        ms = sorted(self.counts_by_level)
        return len(ms) >= 2 and self.counts_by_level[ms[-1]] == self.counts_by_level[ms[-2]]

    @property
    def unanchored(self) -> int:
        return self.num_components - self.num_classes

    @property
    def certified(self) -> bool:
        return self.num_classes == self.lower_bound

    def class_signature(self, cls: int) -> int:
        k = int(np.nonzero(self.class_of[1] == cls)[0][0])
        return int(self.signature_of[1][k])

    def points_with_signature(self, m: int) -> np.ndarray:
        """Points of level ``m`` in each anchored class, every rational orbit
        assigned through its signature."""
        sig_to_cls = {self.class_signature(c): c for c in range(self.num_classes)}
        out = np.zeros(self.num_classes, dtype=np.int64)
        for k, size in enumerate(self.levels[m].orbit_sizes):
            c = sig_to_cls.get(int(self.signature_of[m][k]))
            if c is not None:
                out[c] += size
        return out

    def anchor(self, cls: int) -> np.ndarray:
        """Least prime-level orbit representative of an anchored class."""
        k = int(np.nonzero(self.class_of[1] == cls)[0][0])
        return self.levels[1].representative(k)

    def class_of_points(self, g: np.ndarray, m: int = 1) -> np.ndarray:
        """Components of points defined over ``F_{p^m}``."""
        return self.class_of[m][self.levels[m].orbit_of(g)]

    def orbit_size_of(self, g: np.ndarray, m: int) -> int:
        """Size of the ``E(F_{p^m})``-orbit of a prime-level point."""
        emb = self.levels[1].instance.field.embedding_into(self.levels[m].instance.field)
        table = self.levels[m]
        k = int(table.orbit_of(emb[np.asarray(g, dtype=np.uint8)])[0])
        return int(table.orbit_sizes[k])

    def points_in_class(self, m: int) -> np.ndarray:
        """Points of level ``m`` in each component (pieces not yet joined are missing)."""
        out = np.zeros(self.num_components, dtype=np.int64)
        np.add.at(out, self.class_of[m], self.levels[m].orbit_sizes)
        return out

    def summary(self) -> dict:
        return {
            "n": self.n, "d": self.d, "p": self.p, "m_max": self.m_max,
            "rational_orbits_by_level": {str(m): t.num_orbits for m, t in sorted(self.levels.items())},
            "classes_by_level": {str(m): c for m, c in sorted(self.counts_by_level.items())},
            "geometric_classes": self.num_classes,
            "unanchored_components": self.unanchored,
            "signature_lower_bound": self.lower_bound,
            "stabilized": self.stabilized,
            "certified": self.certified,
        }


def _embed(table_from: OrbitTable, table_to: OrbitTable) -> np.ndarray:
    """Orbit index in ``table_to`` of the image of each orbit representative of ``table_from``."""
    emb = table_from.instance.field.embedding_into(table_to.instance.field)
    reps = np.stack([table_from.representative(k) for k in range(table_from.num_orbits)])
    return table_to.orbit_of(emb[reps])


def orbit_tower(n: int, d: int, p: int, m_max: int, q: int | None = None,
                cap: int = ENUMERATION_CAP, quotient: bool = True) -> OrbitTower:
    """Merge rational orbits along every extension ``F_{p^m} -> F_{p^m'}`` with ``m | m' <= m_max``."""
    if m_max < 1:
        raise TowerTooShort("need at least one level")
    levels = {m: zip_orbits(build_instance(n, d, p, m, q, cap=cap, lazy=True), quotient=quotient)
              for m in range(1, m_max + 1)}
    offsets, total = {}, 0
    for m in range(1, m_max + 1):
        offsets[m] = total
        total += levels[m].num_orbits
    n_prime = levels[1].num_orbits
    counts: dict[int, int] = {}
    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for top in range(1, m_max + 1):
        for m in range(1, top):
            if top % m == 0:
                src.append(offsets[m] + np.arange(levels[m].num_orbits))
                dst.append(offsets[top] + _embed(levels[m], levels[top]))
        used = offsets[top] + levels[top].num_orbits
        s = np.concatenate(src) if src else np.zeros(0, dtype=np.int64)
        t = np.concatenate(dst) if dst else np.zeros(0, dtype=np.int64)
        lab = kernels.components(used, s, t)
        counts[top] = len(np.unique(lab[:n_prime]))
    # anchored components first, by least prime-level orbit; then the rest by first node
    roots, first = np.unique(lab, return_index=True)
    anchored = np.isin(roots, lab[:n_prime])
    order = np.lexsort((first, ~anchored))
    renumber = np.empty(len(roots), dtype=np.int64)
    renumber[order] = np.arange(len(roots))
    dense = renumber[np.searchsorted(roots, lab)]
    class_of = {m: dense[offsets[m]: offsets[m] + levels[m].num_orbits] for m in levels}

    sig_ids: dict[tuple, int] = {}
    signature_of = {}
    for m, table in levels.items():
        ids = [sig_ids.setdefault(signature(table.instance, table.representative(k)), len(sig_ids))
               for k in range(table.num_orbits)]
        signature_of[m] = np.array(ids, dtype=np.int64)
    for c in range(len(roots)):
        seen = {int(i) for m in levels for i in signature_of[m][class_of[m] == c]}
        if len(seen) != 1:
            raise InternalConsistencyError(f"merged component {c} carries {len(seen)} invariant signatures")
    lower = len(set(signature_of[1].tolist()))
    return OrbitTower(n, d, p, levels, class_of, counts, int(anchored.sum()), len(roots), signature_of, lower)


def geometric_orbit_count(n: int, d: int, p: int, m_max: int, q: int | None = None,
                          cap: int = ENUMERATION_CAP) -> int:
    """Number of anchored classes of a tower that has stopped changing.

    The count is accepted when the last level left it unchanged or when it
    meets the signature lower bound.  Otherwise :class:`NonStabilized` is
    raised, carrying the tower.
    """
    if m_max < 2:
        raise TowerTooShort("stabilization needs at least two levels")
    tower = orbit_tower(n, d, p, m_max, q, cap)
    if not (tower.stabilized or tower.certified):
        raise NonStabilized(f"class counts by level {tower.counts_by_level} have not stabilized", tower)
    return tower.num_classes


# --------------------------------------------------------------------------
# Dimension from point counts
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionEstimate:
    """Point-count growth exponents of one geometric class between two levels.

    ``points`` are the class sizes ``N`` at the two levels.  ``raw`` is
    ``log(N2/N1) / log(s2/s1)``.  ``estimate`` is ``dim E`` minus the growth
    exponent of ``|E(F_s)| / N``, which cancels the torus factors that
    ``|E(F_s)|`` and ``N`` share.
    """

    levels: tuple[int, int]
    points: tuple[int, int]
    raw: float
    estimate: float
    expected: int | None = None
    method: str = "class"

    def within(self, tol: float = DIMENSION_TOLERANCE) -> bool:
        return self.expected is not None and abs(self.estimate - self.expected) <= tol

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels), "points": list(self.points),
            "raw": round(self.raw, 4), "estimate": round(self.estimate, 4),
            "expected": self.expected, "method": self.method,
        }


def _exponents(tower: OrbitTower, m1: int, m2: int, n1: int, n2: int) -> tuple[float, float]:
    i1, i2 = tower.levels[m1].instance, tower.levels[m2].instance
    scale = math.log(i2.s / i1.s)
    raw = math.log(n2 / n1) / scale
    stab = math.log((i2.order_E / n2) / (i1.order_E / n1)) / scale
    return raw, i1.dim_E - stab


def dimension_estimate(tower: OrbitTower, cls: int, *, levels: Sequence[int] | None = None,
                       expected: int | None = None, method: str = "class") -> DimensionEstimate:
    """Dimension of an anchored class from point counts.

    ``method="class"`` counts every rational orbit with the class's signature
    (default levels: the last two).  ``method="anchor"`` uses only the orbit
    through the class's prime-level anchor; its stabilizer may have
    components that appear at some levels only, so it defaults to levels
    ``m_max / r, m_max`` for the least prime ``r | m_max``.  A class whose
    signature is shared with another class falls back to ``"anchor"``.
    """
    if not 0 <= cls < tower.num_classes:
        raise ValueError(f"class {cls} is not an anchored class")
    if tower.m_max < 2:
        raise TowerTooShort("a dimension estimate needs two levels")
    if method == "class" and sum(
            tower.class_signature(c) == tower.class_signature(cls) for c in range(tower.num_classes)
        ) > 1:
        method = "anchor"
    if method == "class":
        m1, m2 = (tower.m_max - 1, tower.m_max) if levels is None else levels
        n1 = int(tower.points_with_signature(m1)[cls])
        n2 = int(tower.points_with_signature(m2)[cls])
    elif method == "anchor":
        m1, m2 = default_levels(tower.m_max) if levels is None else levels
        if m2 % m1:
            raise ValueError(f"level {m1} does not divide level {m2}")
        point = tower.anchor(cls)
        n1, n2 = tower.orbit_size_of(point, m1), tower.orbit_size_of(point, m2)
    else:
        raise ValueError(f"unknown method {method!r}")
    raw, est = _exponents(tower, m1, m2, n1, n2)
    return DimensionEstimate((m1, m2), (n1, n2), raw, est, expected, method)


def default_levels(m_max: int) -> tuple[int, int]:
    """``(m_max / r, m_max)`` for the least prime ``r`` dividing ``m_max``."""
    if m_max < 2:
        raise TowerTooShort("a dimension estimate needs two levels")
    r = next(k for k in range(2, m_max + 1) if m_max % k == 0)
    return m_max // r, m_max
