"""Parabolic cosets, double cosets and the Bruhat order."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .rootdata import WeylElement, WeylGroup

__all__ = [
    "NotARepresentative",
    "InternalConsistencyError",
    "CosetTable",
    "DoubleCosetTable",
    "min_coset_reps",
    "project_left",
    "bruhat_leq",
    "bruhat_order_by_reflections",
    "reflections",
    "min_double_coset_reps",
    "project_double",
    "double_coset",
    "max_length_in_fiber",
    "EAGER_LIMIT",
]

EAGER_LIMIT = 10**5


class NotARepresentative(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


def _nodes(W: WeylGroup, J: Iterable[int] | None) -> frozenset[int]:
    J = frozenset(range(W.rank) if J is None else J)
    if not J <= set(range(W.rank)):
        raise ValueError(f"{sorted(J)} is not a subset of the nodes 0..{W.rank - 1}")
    return J


def project_left(w: WeylElement, J: Iterable[int]) -> WeylElement:
    """Minimal-length representative of ``W_J w``."""
    W = w.group
    J = frozenset(J)
    while True:
        d = W.descents(w, "left") & J
        if not d:
            return w
        w = W.compose(W.s(min(d)), w)


def _project_right(w: WeylElement, K: frozenset[int]) -> WeylElement:
    W = w.group
    while True:
        d = W.descents(w, "right") & K
        if not d:
            return w
        w = W.compose(w, W.s(min(d)))


def project_double(w: WeylElement, J: Iterable[int], K: Iterable[int]) -> WeylElement:
    """Minimal-length representative of ``W_J w W_K``."""
    W = w.group
    J, K = frozenset(J), frozenset(K)
    while True:
        dl = W.descents(w, "left") & J
        if dl:
            w = W.compose(W.s(min(dl)), w)
            continue
        dr = W.descents(w, "right") & K
        if dr:
            w = W.compose(w, W.s(min(dr)))
            continue
        return w


@dataclass
class CosetTable:
    """Minimal-length representatives ``^J W`` of the cosets ``W_J w``."""

    group: WeylGroup = field(repr=False)
    J: frozenset[int]
    reps: tuple[WeylElement, ...]
    index: dict[WeylElement, WeylElement] | None = field(default=None, repr=False)

    def rep_of(self, w: WeylElement) -> WeylElement:
        if self.index is not None:
            return self.index[w]
        return project_left(w, self.J)

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)

    def __contains__(self, w: WeylElement) -> bool:
        return not (w.left_descents() & self.J)


def min_coset_reps(W: WeylGroup, J: Iterable[int] | None) -> CosetTable:
    J = _nodes(W, J)
    elements = W.elements()
    reps = tuple(w for w in elements if not (W.descents(w, "left") & J))
    index = None
    if len(elements) <= EAGER_LIMIT:
        index = {w: project_left(w, J) for w in elements}
    return CosetTable(W, J, reps, index)


# --------------------------------------------------------------------------
# Bruhat order
# --------------------------------------------------------------------------

def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    """``u <= w`` in Bruhat order.

    Walks the canonical reduced word of ``w`` letter by letter: for each
    letter ``s`` (a left descent of the remaining suffix), ``u`` is replaced
    by ``min(u, s u)``.  ``u <= w`` iff ``u`` has been reduced to ``e`` when
    the word is exhausted.
    """
    W = w.group
    if u.group is not W:
        W.compose(u, w)  # raises MixedRootSystems
    if u.length > w.length:
        return False
    N = W.roots.n_positive
    simple = W.roots.simple_index
    table = W.roots.reflection_table
    act = u.action
    remaining = u.length
    for i in w.word:
        if act[simple[i]] >= N:
            refl = table[i]
            act = tuple(act[refl[r]] for r in range(len(act)))
            remaining -= 1
    return remaining == 0


def reflections(W: WeylGroup) -> tuple[WeylElement, ...]:
    out = {W.conjugate(W.s(i), w) for w in W.elements() for i in range(W.rank)}
    return tuple(sorted(out, key=WeylElement.sort_key))


def bruhat_order_by_reflections(W: WeylGroup) -> dict[WeylElement, frozenset[WeylElement]]:
    """Down-sets of the Bruhat order built independently of :func:`bruhat_leq`.

    Covers are ``u -> u t`` for reflections ``t`` with ``l(ut) = l(u) + 1``;
    the order is their reflexive-transitive closure.
    """
    ts = reflections(W)
    elements = W.elements()
    below: dict[WeylElement, set[WeylElement]] = {w: {w} for w in elements}
    # elements are sorted by length, so below[u] is complete when u is reached
    for u in elements:
        for t in ts:
            v = W.compose(u, t)
            if v.length == u.length + 1:
                below[v] |= below[u]
    return {w: frozenset(s) for w, s in below.items()}


# --------------------------------------------------------------------------
# Double cosets
# --------------------------------------------------------------------------

def double_coset(x: WeylElement, J: Iterable[int], K: Iterable[int]) -> frozenset[WeylElement]:
    W = x.group
    WJ, WK = W.subgroup(J), W.subgroup(K)
    left = {W.compose(a, x) for a in WJ}
    return frozenset(W.compose(y, b) for y in left for b in WK)


@dataclass
class DoubleCosetTable:
    """Minimal representatives ``^J W^K`` with the fibers ``^J W ∩ W_J x W_K``."""

    group: WeylGroup = field(repr=False)
    J: frozenset[int]
    K: frozenset[int]
    reps: tuple[WeylElement, ...]
    _fibers: dict[WeylElement, tuple[WeylElement, ...]] = field(default_factory=dict, repr=False)

    def fiber(self, x: WeylElement) -> tuple[WeylElement, ...]:
        if x not in self._fibers:
            if not self.is_rep(x):
                raise NotARepresentative(f"{x} is not minimal in its ({sorted(self.J)}, {sorted(self.K)}) double coset")
            W = self.group
            fib = {project_left(W.compose(x, b), self.J) for b in W.subgroup(self.K)}
            self._fibers[x] = tuple(sorted(fib, key=WeylElement.sort_key))
        return self._fibers[x]

    @property
    def fibers(self) -> dict[WeylElement, tuple[WeylElement, ...]]:
        return {x: self.fiber(x) for x in self.reps}

    def is_rep(self, x: WeylElement) -> bool:
        W = self.group
        return not (W.descents(x, "left") & self.J) and not (W.descents(x, "right") & self.K)

    def project(self, w: WeylElement) -> WeylElement:
        return project_double(w, self.J, self.K)

    def max_length_in_fiber(self, x: WeylElement) -> WeylElement:
        fib = self.fiber(x)
        top = max(w.length for w in fib)
        winners = [w for w in fib if w.length == top]
        if len(winners) != 1:
            raise InternalConsistencyError(f"fiber over {x} has {len(winners)} elements of maximal length {top}")
        return winners[0]

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)


def min_double_coset_reps(W: WeylGroup, J: Iterable[int] | None, K: Iterable[int] | None) -> DoubleCosetTable:
    J, K = _nodes(W, J), _nodes(W, K)
    reps = tuple(w for w in W.elements() if not (W.descents(w, "left") & J) and not (W.descents(w, "right") & K))
    table = DoubleCosetTable(W, J, K, reps)
    if W.order <= EAGER_LIMIT:
        for x in reps:
            table.fiber(x)
    return table


def max_length_in_fiber(x: WeylElement, J: Iterable[int], K: Iterable[int]) -> WeylElement:
    """``x^{J,K}``: the longest element of ``^J W ∩ W_J x W_K``."""
    W = x.group
    J, K = _nodes(W, J), _nodes(W, K)
    table = DoubleCosetTable(W, J, K, ())
    return table.max_length_in_fiber(x)
