"""The homomorphism ``e_x`` onto the zip group of a Bruhat cell and its section ``f_x``.

For ``x`` in ``^J W^K`` and ``h = g x`` (a frame element times the
permutation matrix of ``x``) the smaller datum lives on ``M``:

* ``P_x = M ∩ h^{-1} P h`` and ``Q_x = phi(L ∩ h Q h^{-1})``;
* its zip group ``E_x`` is the set of ``(p', q')`` in ``P_x × Q_x`` whose
  Levi images agree under ``phi ∘ int(h)``, that is
  ``q'^{-1} phi(Levi(h p' h^{-1})) ∈ R_u Q_x = phi(L ∩ h V h^{-1})``.

``e_x(p) = (m, phi(l))`` where ``p = u l`` and ``h^{-1} p h = v m``;
``f_x(p', q') = h p' h^{-1}``.  Composing gives ``(p', phi(Levi(h p' h^{-1})))``,
so ``e_x ∘ f_x`` fixes ``(p', q')`` exactly when the ``R_u Q_x`` component of
``q'`` is trivial.  What always holds is the identity on the first entry and
agreement of the second entry modulo ``R_u Q_x``.  Stabilizers of points of
``M`` do not escape this: when ``R_u P_x`` and ``R_u Q_x`` are both
nontrivial, pairs ``(u, u)`` with ``u`` unipotent fix ``t = 1`` and are sent
to ``(u, 1)``.  :func:`section_check` counts all three versions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..rootdata import WeylElement
from .frames import FrameData, datum_of, find_frame
from .instance import FiniteZipInstance, weyl_matrix

__all__ = [
    "NotInIntersection",
    "BruhatCell",
    "bruhat_cells",
    "e_x_map",
    "f_x_section",
    "SectionReport",
    "section_check",
    "KernelReport",
    "kernel_check",
]


class NotInIntersection(ValueError):
    pass


@dataclass(eq=False)
class BruhatCell:
    """Bookkeeping for one ``x`` in ``^J W^K`` and a fixed frame."""

    inst: FiniteZipInstance
    frame: FrameData
    x: WeylElement

    def __post_init__(self):
        alg = self.inst.alg
        self.h = alg.matmul(self.frame.g, weyl_matrix(alg, self.x))
        self.h_inv = alg.inv(self.h)

    # -- conjugations ---------------------------------------------------------

    def conj_in(self, a: np.ndarray) -> np.ndarray:
        """``h a h^{-1}``."""
        return self.inst.alg.product(self.h, a, self.h_inv)

    def conj_out(self, a: np.ndarray) -> np.ndarray:
        """``h^{-1} a h``."""
        return self.inst.alg.product(self.h_inv, a, self.h)

    def phi_inv(self, a: np.ndarray) -> np.ndarray:
        return self.inst.field.frob_inverse[np.asarray(a, dtype=np.uint8)]

    # -- membership -------------------------------------------------------------

    def in_intersection(self, p: np.ndarray) -> np.ndarray:
        """``p ∈ P ∩ h Q h^{-1}``."""
        return self.inst.in_P(p) & self.inst.in_Q(self.conj_out(p))

    def in_P_x(self, a: np.ndarray) -> np.ndarray:
        return self.inst.in_L(a) & self.inst.in_P(self.conj_in(a))

    def in_Q_x(self, a: np.ndarray) -> np.ndarray:
        b = self.phi_inv(a)
        return self.inst.in_L(b) & self.inst.in_Q(self.conj_out(b))

    def in_RuQ_x(self, a: np.ndarray) -> np.ndarray:
        b = self.phi_inv(a)
        c = self.conj_out(b)
        v_part = self.inst.in_Q(c) & np.all(self.inst.levi_part(c) == self.inst.alg.identity(), axis=(-2, -1))
        return self.inst.in_L(b) & v_part

    def phi_x(self, a: np.ndarray) -> np.ndarray:
        """``phi(Levi(h a h^{-1}))`` for ``a ∈ P_x``."""
        return self.inst.phi(self.inst.levi_part(self.conj_in(a)))

    def in_E_x(self, pair) -> np.ndarray:
        p, q = pair
        alg = self.inst.alg
        ok = self.in_P_x(p) & self.in_Q_x(q)
        inv_q, inv_ok = alg.inverse(q)
        return ok & inv_ok & self.in_RuQ_x(alg.matmul(inv_q, self.phi_x(p)))

    # -- point sets ---------------------------------------------------------------

    @cached_property
    def intersection_points(self) -> np.ndarray:
        P = self.inst.P_points
        return P[self.in_intersection(P)]

    @cached_property
    def P_x_points(self) -> np.ndarray:
        L = self.inst.L_points
        return L[self.in_P_x(L)]

    @cached_property
    def RuQ_x_points(self) -> np.ndarray:
        L = self.inst.L_points
        return L[self.in_RuQ_x(L)]

    @cached_property
    def E_x_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Pairs ``(p', phi_x(p') r)`` for ``r`` in ``R_u Q_x``."""
        alg = self.inst.alg
        base = self.phi_x(self.P_x_points)
        r = self.RuQ_x_points
        p = np.repeat(self.P_x_points, len(r), axis=0)
        q = alg.matmul(base[:, None], r[None, :]).reshape(-1, self.inst.n, self.inst.n)
        return p, q

    @cached_property
    def kernel_shadow_points(self) -> np.ndarray:
        """``U ∩ h V h^{-1}``."""
        U = self.inst.U_points
        c = self.conj_out(U)
        keep = self.inst.in_Q(c) & np.all(self.inst.levi_part(c) == self.inst.alg.identity(), axis=(-2, -1))
        return U[keep]


def bruhat_cells(inst: FiniteZipInstance, frame: FrameData | None = None) -> list[BruhatCell]:
    """One cell per element of ``^J W^K``, in the datum's order."""
    frame = find_frame(inst) if frame is None else frame
    datum = datum_of(inst)
    return [BruhatCell(inst, frame, x) for x in datum.double_cosets]


def e_x_map(cell: BruhatCell, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``p -> (m, phi(l))``; raises :class:`NotInIntersection` off ``P ∩ h Q h^{-1}``."""
    inst = cell.inst
    p = np.asarray(p, dtype=np.uint8)
    if not np.all(cell.in_intersection(p)):
        raise NotInIntersection("element is not in P ∩ (g x) Q (g x)^{-1}")
    _, ell = inst.levi_decompose(p)
    _, m = inst.q_decompose(cell.conj_out(p))
    return m, inst.phi(ell)


def f_x_section(cell: BruhatCell, pair) -> np.ndarray:
    """``(p', q') -> h p' h^{-1}``; raises :class:`NotInIntersection` off ``E_x``."""
    p, q = (np.asarray(a, dtype=np.uint8) for a in pair)
    if not np.all(cell.in_E_x((p, q))):
        raise NotInIntersection("pair is not a point of the smaller zip group")
    return cell.conj_in(p)


@dataclass(frozen=True)
class SectionReport:
    x: str
    points: int
    fixed: int
    unipotent_radical: int
    modulo_radical: int
    stabilizer_pairs: int
    stabilizer_fixed: int
    stabilizer_surjective: bool
    first_failure: tuple | None = field(default=None, compare=False)

    @property
    def literal(self) -> bool:
        return self.fixed == self.points

    @property
    def up_to_radical(self) -> bool:
        return self.modulo_radical == self.points

    @property
    def on_stabilizers(self) -> bool:
        return self.stabilizer_fixed == self.stabilizer_pairs and self.stabilizer_surjective

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "E_x_points": self.points,
            "fixed_by_e_after_f": self.fixed,
            "RuQ_x_points": self.unipotent_radical,
            "literal": "PASS" if self.literal else "FAIL",
            "fixed_modulo_RuQ_x": self.modulo_radical,
            "up_to_radical": "PASS" if self.up_to_radical else "FAIL",
            "stabilizer_pairs": self.stabilizer_pairs,
            "stabilizer_fixed": self.stabilizer_fixed,
            "stabilizer_surjective": self.stabilizer_surjective,
            "on_stabilizers": "PASS" if self.on_stabilizers else "FAIL",
            "first_failure": self.first_failure,
        }


def _same(a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    return np.all(a[0] == b[0], axis=(-2, -1)) & np.all(a[1] == b[1], axis=(-2, -1))


def section_check(cell: BruhatCell) -> SectionReport:
    """``e_x ∘ f_x`` on every point of ``E_x``, and on each stabilizer ``Stab_{E_x}(t)``, ``t ∈ M``.

    For the stabilizer part, ``f_x`` must land in ``Stab(h t V)`` and ``e_x``
    must map ``Stab(h t V)`` onto ``Stab_{E_x}(t)``.
    """
    inst, alg = cell.inst, cell.inst.alg
    pair = cell.E_x_points
    image = e_x_map(cell, f_x_section(cell, pair))
    same = _same(image, pair)
    first = np.all(image[0] == pair[0], axis=(-2, -1))
    modulo = first & cell.in_RuQ_x(alg.matmul(alg.inv(image[1]), pair[1]))
    failure = None
    if not np.all(same):
        k = int(np.nonzero(~same)[0][0])
        failure = (pair[0][k].astype(int).tolist(), pair[1][k].astype(int).tolist())

    inter = cell.intersection_points
    e_inter = e_x_map(cell, inter)
    stab_pairs = stab_fixed = 0
    surjective = True
    for t in inst.L_points:
        # Stab_{E_x}(t): p' t q'^{-1} = t
        keep = np.all(alg.product(pair[0], t, alg.inv(pair[1])) == t, axis=(-2, -1))
        sub = (pair[0][keep], pair[1][keep])
        stab_pairs += len(sub[0])
        lifted = f_x_section(cell, sub)
        ht = alg.matmul(cell.h, t)
        moved = alg.product(lifted, ht, alg.inv(inst.phi(inst.levi_part(lifted))))
        in_stab = np.all(inst.v_canonical(moved) == inst.v_canonical(ht[None]), axis=(-2, -1))
        back = e_x_map(cell, lifted)
        stab_fixed += int(np.sum(in_stab & _same(back, sub)))
        # image of Stab_{P ∩ hQh^{-1}}(h t V) under e_x
        moved = alg.product(inter, ht, alg.inv(inst.phi(inst.levi_part(inter))))
        fix = np.all(inst.v_canonical(moved) == inst.v_canonical(ht[None]), axis=(-2, -1))
        img = set(zip(alg.encode(e_inter[0][fix]).tolist(), alg.encode(e_inter[1][fix]).tolist()))
        target = set(zip(alg.encode(sub[0]).tolist(), alg.encode(sub[1]).tolist()))
        surjective &= img == target
    return SectionReport(
        datum_word(cell), len(pair[0]), int(np.sum(same)), len(cell.RuQ_x_points),
        int(np.sum(modulo)), stab_pairs, stab_fixed, bool(surjective), failure,
    )


def datum_word(cell: BruhatCell) -> str:
    return cell.x.group.format_word(cell.x.word)


@dataclass(frozen=True)
class KernelReport:
    x: str
    kernel: int
    shadow: int
    shadow_in_kernel: bool
    equal: bool

    def to_dict(self) -> dict:
        return {
            "x": self.x, "kernel": self.kernel, "U_cap_hVh^-1": self.shadow,
            "containment": self.shadow_in_kernel, "equal_on_points": self.equal,
        }


def kernel_check(cell: BruhatCell) -> KernelReport:
    """Compare ``Ker(e_x)`` on points with ``U ∩ h V h^{-1}``."""
    alg = cell.inst.alg
    inter = cell.intersection_points
    m, fl = e_x_map(cell, inter)
    one = alg.identity()
    trivial = np.all(m == one, axis=(-2, -1)) & np.all(fl == one, axis=(-2, -1))
    kernel = set(alg.encode(inter[trivial]).tolist())
    shadow = set(alg.encode(cell.kernel_shadow_points).tolist())
    return KernelReport(datum_word(cell), len(kernel), len(shadow), shadow <= kernel, shadow == kernel)
