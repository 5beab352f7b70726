"""Combinatorial zip data and the stratifications they index.

A :class:`CombZipDatum` records ``(W, J, K, psi, sigma, q)``: the types of the
two parabolics, the isomorphism ``psi: W_J -> W_K`` induced by the isogeny
and a frame, the Frobenius action ``sigma`` on the Dynkin diagram, and the
base field size.  Strata are indexed by ``^J W``; the closure order is

    w' ⪯ w  iff  y w' psi(y)^{-1} <= w  for some y in W_J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .parabolic import (
    InternalConsistencyError,
    NotARepresentative,
    bruhat_leq,
    min_coset_reps,
    min_double_coset_reps,
    project_double,
    project_left,
)
from .rootdata import CartanSpec, RootSystem, WeylElement, WeylGroup, _perm_order

__all__ = [
    "ZipDatumError",
    "NotAMinimalRep",
    "SigmaDoesNotPreserveJ",
    "CombZipDatum",
    "StratPoset",
    "Report",
    "zip_datum_from_cocharacter",
    "zip_leq",
    "closure_poset",
    "cover_relations",
    "stratum_dimension",
    "purity_check",
    "bruhat_projection",
    "bruhat_strata",
    "bruhat_order_leq",
    "monotonicity_check",
    "galois_orbits",
    "restrict_zip_datum",
]


class ZipDatumError(ValueError):
    pass


class NotAMinimalRep(ZipDatumError):
    pass


class SigmaDoesNotPreserveJ(ZipDatumError):
    pass


@dataclass(frozen=True, eq=False)
class CombZipDatum:
    group: WeylGroup = field(repr=False)
    J: frozenset[int]
    K: frozenset[int]
    psi: Mapping[int, int]
    sigma: tuple[int, ...]
    q: int | None = None
    # set on data produced by restrict_zip_datum: sub-node -> parent node
    embedding: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        W = self.group
        object.__setattr__(self, "J", frozenset(self.J))
        object.__setattr__(self, "K", frozenset(self.K))
        object.__setattr__(self, "psi", dict(sorted(self.psi.items())))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        nodes = set(range(W.rank))
        if not (self.J <= nodes and self.K <= nodes):
            raise ZipDatumError("J and K must be subsets of the nodes")
        if set(self.psi) != set(self.J) or set(self.psi.values()) != set(self.K) or len(self.J) != len(self.K):
            raise ZipDatumError(f"psi {self.psi} is not a bijection J={sorted(self.J)} -> K={sorted(self.K)}")
        self._check_psi()

    def _check_psi(self) -> None:
        W = self.group
        J = sorted(self.J)
        # Coxeter relations on generators
        for a, b in product(J, J):
            if _order(W.s(a) * W.s(b)) != _order(W.s(self.psi[a]) * W.s(self.psi[b])):
                raise ZipDatumError(f"psi does not preserve the braid relation between {a} and {b}")
        if W.rank > 4:
            return
        WJ = W.subgroup(J)
        images = {}
        for y in WJ:
            img = self.psi_of(y)
            if img.length != y.length:
                raise ZipDatumError(f"psi does not preserve the length of {y}")
            images[y] = img
        if len(set(images.values())) != len(WJ):
            raise ZipDatumError("psi is not injective on W_J")
        for y in WJ:
            for a in J:
                if images[y * W.s(a)] != images[y] * W.s(self.psi[a]):
                    raise ZipDatumError("psi is not a homomorphism on W_J")

    def psi_of(self, y: WeylElement) -> WeylElement:
        return self.group.from_word(self.psi[i] for i in y.word)

    @property
    def rank(self) -> int:
        return self.group.rank

    @cached_property
    def cosets(self):
        return min_coset_reps(self.group, self.J)

    @cached_property
    def double_cosets(self):
        return min_double_coset_reps(self.group, self.J, self.K)

    @cached_property
    def _twisted_pairs(self) -> tuple[tuple[WeylElement, WeylElement], ...]:
        W = self.group
        return tuple((y, W.inverse(self.psi_of(y))) for y in W.subgroup(self.J))

    def to_dict(self) -> dict:
        spec = self.group.spec
        return {
            "cartan": spec.label if spec.label else [list(r) for r in spec.entries],
            "rank": self.rank,
            "J": sorted(self.J),
            "K": sorted(self.K),
            "psi": {str(k): v for k, v in sorted(self.psi.items())},
            "sigma": list(self.sigma),
            "q": self.q,
        }


def _order(w: WeylElement) -> int:
    k, u = 1, w
    while not u.is_identity():
        u = u * w
        k += 1
    return k


def _simple_index(w: WeylElement) -> int:
    if w.length != 1:
        raise InternalConsistencyError(f"{w} is not a simple reflection")
    return w.word[0]


def zip_datum_from_cocharacter(
    W: WeylGroup,
    J: Iterable[int],
    sigma: Sequence[int] | None = None,
    q: int | None = None,
    twist: bool = True,
) -> CombZipDatum:
    """Zip datum of a cocharacter whose parabolic has frame type ``J``.

    ``K = sigma(iota(J))``.  With ``twist`` (the default) the isomorphism is
    ``psi = sigma o int(w0 w0J)``, the one induced by the standard frame
    ``g = w0 w0J`` of the ``GL_n`` zip datum; ``twist=False`` gives
    ``sigma o int(w0)``.
    """
    J = frozenset(J)
    sigma = tuple(W.sigma if sigma is None else sigma)
    iota = W.opposition()
    K = frozenset(sigma[iota[j]] for j in J)
    w0 = W.longest_element()
    c = w0 * W.longest_element(J) if twist else w0
    psi = {}
    for j in J:
        image = _simple_index(W.conjugate(W.s(j), c))
        psi[j] = sigma[image]
    return CombZipDatum(W, J, K, psi, sigma, q)


# --------------------------------------------------------------------------
# The closure order
# --------------------------------------------------------------------------

def _require_rep(datum: CombZipDatum, *ws: WeylElement) -> None:
    for w in ws:
        if w.group is not datum.group:
            raise NotAMinimalRep(f"{w} is not an element of the datum's Weyl group")
        if w.left_descents() & datum.J:
            raise NotAMinimalRep(f"{w} is not a minimal representative in ^J W for J={sorted(datum.J)}")


def zip_leq(datum: CombZipDatum, w_prime: WeylElement, w: WeylElement) -> bool:
    _require_rep(datum, w_prime, w)
    return _zip_leq(datum, w_prime, w)


def _zip_leq(datum: CombZipDatum, w_prime: WeylElement, w: WeylElement) -> bool:
    if w_prime.length > w.length:
        return False
    W = datum.group
    for y, psi_inv in datum._twisted_pairs:
        if bruhat_leq(W.compose(W.compose(y, w_prime), psi_inv), w):
            return True
    return False


@dataclass
class StratPoset:
    nodes: tuple[WeylElement, ...]
    dims: tuple[int, ...]
    leq: tuple[tuple[bool, ...], ...] = field(repr=False)
    edges: tuple[tuple[int, int], ...]
    galois_classes: tuple[tuple[int, ...], ...] | None = None

    def index(self, w: WeylElement) -> int:
        return self.nodes.index(w)

    def __len__(self) -> int:
        return len(self.nodes)


def cover_relations(leq: Sequence[Sequence[bool]]) -> tuple[tuple[int, int], ...]:
    n = len(leq)
    out = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if not any(k not in (i, j) and leq[i][k] and leq[k][j] for k in range(n)):
                out.append((i, j))
    return tuple(sorted(out))


def _verify_partial_order(nodes, leq) -> None:
    n = len(nodes)
    for i in range(n):
        if not leq[i][i]:
            raise InternalConsistencyError(f"zip order is not reflexive at {nodes[i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise InternalConsistencyError(f"zip order is not antisymmetric: {nodes[i]} and {nodes[j]}")
    for i in range(n):
        for j in range(n):
            if not leq[i][j]:
                continue
            for k in range(n):
                if leq[j][k] and not leq[i][k]:
                    raise InternalConsistencyError(
                        f"zip order is not transitive: {nodes[i]} <= {nodes[j]} <= {nodes[k]}"
                    )


def closure_poset(datum: CombZipDatum, with_galois: bool = False, degree: int = 1) -> StratPoset:
    nodes = tuple(datum.cosets.reps)
    n = len(nodes)
    leq = tuple(tuple(_zip_leq(datum, nodes[i], nodes[j]) for j in range(n)) for i in range(n))
    _verify_partial_order(nodes, leq)
    # unique minimum e, unique maximum the longest element of ^J W
    top = max(range(n), key=lambda k: nodes[k].length)
    if not all(leq[0][j] for j in range(n)) or not nodes[0].is_identity():
        raise InternalConsistencyError("e is not the unique minimum of the zip order")
    if not all(leq[i][top] for i in range(n)):
        raise InternalConsistencyError(f"{nodes[top]} is not the unique maximum of the zip order")
    classes = None
    if with_galois:
        orbit_lists = galois_orbits(datum, degree)
        classes = tuple(tuple(nodes.index(w) for w in orb) for orb in orbit_lists)
    return StratPoset(nodes, tuple(w.length for w in nodes), leq, cover_relations(leq), classes)


def stratum_dimension(w: WeylElement) -> int:
    return w.length


@dataclass
class Report:
    name: str
    verdict: str
    entries: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "entries": self.entries, "violations": self.violations}


def purity_check(poset: StratPoset) -> Report:
    """Every cover ``u ⋖ w`` of the closure order must drop the dimension by 1."""
    entries, bad = [], []
    for i, j in poset.edges:
        drop = poset.dims[j] - poset.dims[i]
        entry = {"lower": repr(poset.nodes[i]), "upper": repr(poset.nodes[j]), "drop": drop}
        entries.append(entry)
        if drop != 1:
            bad.append(entry)
    return Report("purity", "FAIL" if bad else "PASS", entries, bad)


# --------------------------------------------------------------------------
# Bruhat strata
# --------------------------------------------------------------------------

def bruhat_projection(datum: CombZipDatum, w: WeylElement) -> WeylElement:
    _require_rep(datum, w)
    return project_double(w, datum.J, datum.K)


def bruhat_strata(datum: CombZipDatum) -> list[tuple[WeylElement, int]]:
    table = datum.double_cosets
    return [(x, table.max_length_in_fiber(x).length) for x in table.reps]


def _sigma_power(datum: CombZipDatum, degree: int) -> tuple[int, ...]:
    perm = tuple(range(datum.rank))
    for _ in range(degree % _perm_order(datum.sigma)):
        perm = tuple(datum.sigma[i] for i in perm)
    return perm


def bruhat_order_leq(datum: CombZipDatum, x_prime: WeylElement, x: WeylElement, degree: int = 1) -> bool:
    """``[x'] <= [x]`` on Galois orbits of ``^J W^K``."""
    W = datum.group
    tau = _sigma_power(datum, degree)
    if frozenset(tau[j] for j in datum.J) != datum.J:
        raise SigmaDoesNotPreserveJ(f"sigma^{degree} moves J={sorted(datum.J)}")
    u = x_prime
    for _ in range(_perm_order(tau)):
        if bruhat_leq(u, x):
            return True
        u = project_double(W.apply_sigma(u, tau), datum.J, datum.K)
    return False


def monotonicity_check(datum: CombZipDatum, degree: int = 1) -> Report:
    """``w' ⪯ w`` must imply ``[proj w'] <= [proj w]``."""
    nodes = datum.cosets.reps
    proj = {w: project_double(w, datum.J, datum.K) for w in nodes}
    entries, bad = [], []
    for wp in nodes:
        for w in nodes:
            if _zip_leq(datum, wp, w):
                ok = bruhat_order_leq(datum, proj[wp], proj[w], degree)
                entry = {"lower": repr(wp), "upper": repr(w), "proj_lower": repr(proj[wp]), "proj_upper": repr(proj[w])}
                entries.append(entry)
                if not ok:
                    bad.append(entry)
    return Report("monotone", "FAIL" if bad else "PASS", entries, bad)


# --------------------------------------------------------------------------
# Galois orbits
# --------------------------------------------------------------------------

def galois_orbits(datum: CombZipDatum, degree: int = 1) -> list[tuple[WeylElement, ...]]:
    """Orbits of ``<sigma^degree>`` on ``^J W``, acting by ``w -> proj_J(sigma(w))``."""
    if degree < 1:
        raise ValueError("degree must be a positive integer")
    W = datum.group
    tau = _sigma_power(datum, degree)
    if frozenset(tau[j] for j in datum.J) != datum.J:
        raise SigmaDoesNotPreserveJ(f"sigma^{degree} moves J={sorted(datum.J)}")
    seen: set[WeylElement] = set()
    orbits = []
    for w in datum.cosets.reps:
        if w in seen:
            continue
        orb = [w]
        u = project_left(W.apply_sigma(w, tau), datum.J)
        while u != w:
            orb.append(u)
            u = project_left(W.apply_sigma(u, tau), datum.J)
        seen.update(orb)
        orbits.append(tuple(sorted(orb, key=WeylElement.sort_key)))
    return orbits


# --------------------------------------------------------------------------
# Passing to a smaller zip datum
# --------------------------------------------------------------------------

def restrict_zip_datum(datum: CombZipDatum, x: WeylElement) -> CombZipDatum:
    """The zip datum over ``(W_K, K)`` attached to ``x`` in ``^J W^K``.

    ``J_x`` is the Kilmoyer intersection ``K ∩ x^{-1} J x`` and
    ``psi_x(y) = psi(x y x^{-1})``.
    """
    W = datum.group
    if x.group is not W or not datum.double_cosets.is_rep(x):
        raise NotARepresentative(f"{x} is not in ^J W^K for J={sorted(datum.J)}, K={sorted(datum.K)}")
    K = sorted(datum.K)
    sub_of = {k: a for a, k in enumerate(K)}
    x_inv = W.inverse(x)
    J_x, psi_x = [], {}
    for j in sorted(datum.J):
        c = W.compose(W.compose(x_inv, W.s(j)), x)
        if c.length == 1 and c.word[0] in datum.K:
            k = c.word[0]
            J_x.append(sub_of[k])
            psi_x[sub_of[k]] = sub_of[datum.psi[j]]
    spec = datum.group.spec.submatrix(K)
    sub = WeylGroup(RootSystem(spec))
    return CombZipDatum(
        sub,
        frozenset(J_x),
        frozenset(psi_x.values()),
        psi_x,
        tuple(range(len(K))),
        datum.q,
        embedding=tuple(K),
    )
