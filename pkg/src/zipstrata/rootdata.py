"""Root systems and Weyl groups built from Cartan matrices.

Conventions (fixed here, used everywhere else in the package):

* Cartan entries are ``a[i][j] = <alpha_i^vee, alpha_j>``, so the simple
  reflection ``s_i`` sends ``beta`` to ``beta - <alpha_i^vee, beta> alpha_i``.
* Roots are integer coordinate vectors in the basis of simple roots.  The
  positive roots come first, sorted by height, then the negative roots in the
  same order.
* A Weyl element stores its *right* action on the root list:
  ``action[r]`` is the index of ``w^{-1}(root_r)``.  With this convention the
  product ``u * v`` (word concatenation) acts by applying ``u`` first and then
  ``v``.  ``compose(u, v)`` is that product.
* The canonical word of an element is its lexicographically least reduced
  word over the node indices ``0..n-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "RootDataError",
    "MalformedCartan",
    "NotFiniteType",
    "EnumerationTooLarge",
    "MixedRootSystems",
    "CartanSpec",
    "RootSystem",
    "WeylElement",
    "WeylGroup",
    "build",
    "cartan_matrix",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 10**7
ROOT_CAP = 10**4


class RootDataError(ValueError):
    pass


class MalformedCartan(RootDataError):
    pass


class NotFiniteType(RootDataError):
    pass


class EnumerationTooLarge(NotFiniteType):
    """The group is larger than the enumeration cap."""


class MixedRootSystems(RootDataError):
    pass


# --------------------------------------------------------------------------
# Cartan matrices of the finite series
# --------------------------------------------------------------------------

def _from_gram(lengths: Sequence[Fraction], edges: dict[tuple[int, int], Fraction]) -> tuple[tuple[int, ...], ...]:
    n = len(lengths)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i, ln in enumerate(lengths):
        gram[i][i] = Fraction(ln)
    for (i, j), v in edges.items():
        gram[i][j] = gram[j][i] = Fraction(v)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            a = 2 * gram[i][j] / gram[i][i]
            assert a.denominator == 1
            row.append(int(a))
        rows.append(tuple(row))
    return tuple(rows)


def _series(letter: str, n: int) -> tuple[tuple[int, ...], ...]:
    F = Fraction
    path = {(i, i + 1): F(-1) for i in range(n - 1)}
    if letter == "A" and n >= 1:
        return _from_gram([F(2)] * n, path)
    if letter == "B" and n >= 2:
        return _from_gram([F(2)] * (n - 1) + [F(1)], path)
    if letter == "C" and n >= 2:
        edges = dict(path)
        edges[(n - 2, n - 1)] = F(-2)
        return _from_gram([F(2)] * (n - 1) + [F(4)], edges)
    if letter == "D" and n >= 4:
        edges = {(i, i + 1): F(-1) for i in range(n - 2)}
        edges[(n - 3, n - 1)] = F(-1)
        return _from_gram([F(2)] * n, edges)
    if letter == "E" and n in (6, 7, 8):
        # Bourbaki numbering: 1-3-4-5-6-7-8 with 2 attached to 4
        bourbaki = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]
        edges = {(i - 1, j - 1): F(-1) for i, j in bourbaki}
        return _from_gram([F(2)] * n, edges)
    if letter == "F" and n == 4:
        return _from_gram([F(4), F(4), F(2), F(2)], {(0, 1): F(-2), (1, 2): F(-2), (2, 3): F(-1)})
    if letter == "G" and n == 2:
        return _from_gram([F(2), F(6)], {(0, 1): F(-3)})
    raise MalformedCartan(f"unknown Cartan type {letter}{n}")


_LABEL = re.compile(r"^([A-Ga-g])(\d+)$")


def cartan_matrix(label: str) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix for a series tag such as ``"C2"`` or ``"A1xA2"``."""
    blocks = []
    for part in re.split(r"[x+*]", label.strip()):
        m = _LABEL.match(part.strip())
        if not m:
            raise MalformedCartan(f"cannot parse Cartan label {label!r}")
        blocks.append(_series(m.group(1).upper(), int(m.group(2))))
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return tuple(tuple(r) for r in out)


# --------------------------------------------------------------------------
# CartanSpec
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanSpec:
    entries: tuple[tuple[int, ...], ...]
    label: str | None = None
    automorphism: tuple[int, ...] | None = None

    def __post_init__(self):
        entries = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise MalformedCartan("Cartan matrix must be square")
        for i in range(n):
            if entries[i][i] != 2:
                raise MalformedCartan(f"diagonal entry ({i},{i}) is {entries[i][i]}, expected 2")
            for j in range(n):
                if i != j:
                    if entries[i][j] > 0:
                        raise MalformedCartan(f"off-diagonal entry ({i},{j}) is positive")
                    if (entries[i][j] == 0) != (entries[j][i] == 0):
                        raise MalformedCartan(f"entries ({i},{j}) and ({j},{i}) disagree on zero")
        auto = tuple(range(n)) if self.automorphism is None else tuple(int(k) for k in self.automorphism)
        if sorted(auto) != list(range(n)):
            raise MalformedCartan(f"automorphism {auto} is not a permutation of 0..{n - 1}")
        for i in range(n):
            for j in range(n):
                if entries[auto[i]][auto[j]] != entries[i][j]:
                    raise MalformedCartan(f"automorphism {auto} does not preserve the Cartan matrix")
        object.__setattr__(self, "automorphism", auto)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @classmethod
    def from_label(cls, label: str, automorphism: Sequence[int] | None = None) -> "CartanSpec":
        return cls(cartan_matrix(label), label=label.strip(), automorphism=automorphism)

    @classmethod
    def from_file(cls, path: str | Path, automorphism: Sequence[int] | None = None) -> "CartanSpec":
        """Read whitespace-separated integer rows."""
        rows = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                try:
                    rows.append(tuple(int(t) for t in line.split()))
                except ValueError as exc:
                    raise MalformedCartan(f"{path}: non-integer entry in row {line!r}") from exc
        return cls(tuple(rows), automorphism=automorphism)

    def submatrix(self, nodes: Sequence[int]) -> "CartanSpec":
        nodes = list(nodes)
        return CartanSpec(tuple(tuple(self.entries[i][j] for j in nodes) for i in nodes))


# --------------------------------------------------------------------------
# RootSystem
# --------------------------------------------------------------------------

class RootSystem:
    """All roots of a finite-type Cartan matrix with the simple-reflection table."""

    def __init__(self, spec: CartanSpec):
        self.spec = spec
        self.rank = n = spec.rank
        a = spec.entries

        def reflect(i: int, beta: tuple[int, ...]) -> tuple[int, ...]:
            c = sum(a[i][j] * beta[j] for j in range(n))
            if c == 0:
                return beta
            return tuple(b - c if k == i else b for k, b in enumerate(beta))

        simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(n):
                    gamma = reflect(i, beta)
                    if gamma not in seen:
                        seen.add(gamma)
                        nxt.append(gamma)
                        if len(seen) > ROOT_CAP:
                            raise NotFiniteType("root enumeration exceeded the cap; Cartan matrix is not of finite type")
            frontier = nxt

        positive = sorted((r for r in seen if all(c >= 0 for c in r)), key=lambda r: (sum(r), [-c for c in r]))
        if len(positive) * 2 != len(seen):
            raise NotFiniteType("roots are not split into positive and negative halves")
        self.positive_roots: tuple[tuple[int, ...], ...] = tuple(positive)
        self.roots: tuple[tuple[int, ...], ...] = tuple(positive) + tuple(tuple(-c for c in r) for r in positive)
        self.n_positive = N = len(positive)
        self.index = {r: k for k, r in enumerate(self.roots)}
        self.simple_index = tuple(self.index[r] for r in simple)
        self.reflection_table: tuple[tuple[int, ...], ...] = tuple(
            tuple(self.index[reflect(i, r)] for r in self.roots) for i in range(n)
        )
        self.negation = tuple((k + N) % (2 * N) for k in range(2 * N))

    def is_positive(self, k: int) -> bool:
        return k < self.n_positive

    def height(self, k: int) -> int:
        return sum(self.roots[k])

    def __repr__(self) -> str:
        return f"RootSystem({self.spec.label or self.spec.entries}, |Phi+|={self.n_positive})"


# --------------------------------------------------------------------------
# Weyl elements
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeylElement:
    group: "WeylGroup" = field(repr=False)
    action: tuple[int, ...] = field(repr=False)

    @cached_property
    def word(self) -> tuple[int, ...]:
        """Lexicographically least reduced word."""
        g = self.group
        act = self.action
        out = []
        while True:
            for i in range(g.rank):
                if act[g.roots.simple_index[i]] >= g.roots.n_positive:
                    out.append(i)
                    refl = g.roots.reflection_table[i]
                    act = tuple(act[refl[r]] for r in range(len(act)))
                    break
            else:
                return tuple(out)

    @cached_property
    def length(self) -> int:
        N = self.group.roots.n_positive
        return sum(1 for r in range(N) if self.action[r] >= N)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.group is other.group and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.group.compose(self, other)

    def inverse(self) -> "WeylElement":
        return self.group.inverse(self)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.length, self.word)

    def __lt__(self, other: "WeylElement") -> bool:
        return self.sort_key() < other.sort_key()

    def is_identity(self) -> bool:
        return self.action == self.group.identity.action

    def left_descents(self) -> frozenset[int]:
        return self.group.descents(self, "left")

    def right_descents(self) -> frozenset[int]:
        return self.group.descents(self, "right")

    def __repr__(self) -> str:
        return self.group.format_word(self.word)


class WeylGroup:
    """Handle on the Weyl group of a :class:`RootSystem`.

    Elements are created on demand; :meth:`elements` enumerates the whole
    group (capped) sorted by length and canonical word.
    """

    def __init__(self, roots: RootSystem, cap: int = ENUMERATION_CAP):
        self.roots = roots
        self.spec = roots.spec
        self.rank = roots.rank
        self.cap = cap
        self._cache: dict[tuple[int, ...], WeylElement] = {}
        self.identity = self._make(tuple(range(len(roots.roots))))
        self.generators = tuple(self._make(roots.reflection_table[i]) for i in range(self.rank))

    def _make(self, action: tuple[int, ...]) -> WeylElement:
        w = self._cache.get(action)
        if w is None:
            w = WeylElement(self, action)
            self._cache[action] = w
        return w

    def _check(self, *ws: WeylElement) -> None:
        for w in ws:
            if w.group is not self:
                raise MixedRootSystems("Weyl elements belong to different root systems")

    # -- group law ---------------------------------------------------------

    def compose(self, u: WeylElement, v: WeylElement) -> WeylElement:
        """The product ``u v``: ``u`` acts first, then ``v``."""
        if u.group is not v.group:
            raise MixedRootSystems("cannot compose elements of different root systems")
        self._check(u)
        ua, va = u.action, v.action
        return self._make(tuple(va[k] for k in ua))

    def inverse(self, w: WeylElement) -> WeylElement:
        self._check(w)
        inv = [0] * len(w.action)
        for k, t in enumerate(w.action):
            inv[t] = k
        return self._make(tuple(inv))

    def from_word(self, word: Iterable[int]) -> WeylElement:
        act = self.identity.action
        table = self.roots.reflection_table
        for i in word:
            if not 0 <= i < self.rank:
                raise RootDataError(f"node index {i} out of range for rank {self.rank}")
            refl = table[i]
            act = tuple(refl[k] for k in act)
        return self._make(act)

    def s(self, i: int) -> WeylElement:
        return self.generators[i]

    def conjugate(self, w: WeylElement, by: WeylElement) -> WeylElement:
        """``by * w * by^{-1}``."""
        return self.compose(self.compose(by, w), self.inverse(by))

    # -- length, descents, longest elements --------------------------------

    def length(self, w: WeylElement) -> int:
        self._check(w)
        return w.length

    def descents(self, w: WeylElement, side: str = "left") -> frozenset[int]:
        self._check(w)
        N = self.roots.n_positive
        if side == "left":
            act = w.action
            return frozenset(i for i in range(self.rank) if act[self.roots.simple_index[i]] >= N)
        if side == "right":
            return self.descents(self.inverse(w), "left")
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    def longest_element(self, J: Iterable[int] | None = None) -> WeylElement:
        J = sorted(set(range(self.rank) if J is None else J))
        w = self.identity
        while True:
            for i in J:
                if i not in self.descents(w, "left"):
                    w = self.compose(self.generators[i], w)
                    break
            else:
                return w

    # -- diagram automorphism ----------------------------------------------

    @property
    def sigma(self) -> tuple[int, ...]:
        return self.spec.automorphism

    def apply_sigma(self, w: WeylElement, sigma: Sequence[int] | None = None, power: int = 1) -> WeylElement:
        perm = tuple(self.sigma if sigma is None else sigma)
        word = w.word
        for _ in range(power % max(1, _perm_order(perm))):
            word = tuple(perm[i] for i in word)
        return self.from_word(word)

    @cached_property
    def _opposition(self) -> tuple[int, ...]:
        w0 = self.longest_element()
        inv = self.inverse(w0).action
        # w0 = w0^{-1} sends alpha_i to -alpha_{iota(i)}
        out = []
        for i in range(self.rank):
            image = self.roots.negation[inv[self.roots.simple_index[i]]]
            out.append(self.roots.simple_index.index(image))
        return tuple(out)

    def opposition(self, s: int | None = None):
        """Opposition involution on nodes, ``s_{iota(i)} = w0 s_i w0``."""
        if s is None:
            return self._opposition
        return self._opposition[s]

    # -- enumeration -------------------------------------------------------

    @cached_property
    def order(self) -> int:
        """|W| from the exponents read off the root heights."""
        heights: dict[int, int] = {}
        for k in range(self.roots.n_positive):
            h = self.roots.height(k)
            heights[h] = heights.get(h, 0) + 1
        exps = [sum(1 for c in heights.values() if c >= j) for j in range(1, self.rank + 1)]
        return prod(e + 1 for e in exps)

    def iter_subgroup(self, J: Iterable[int] | None = None) -> Iterator[WeylElement]:
        """Breadth-first enumeration of ``W_J`` (all of ``W`` by default)."""
        J = sorted(set(range(self.rank) if J is None else J))
        seen = {self.identity.action}
        frontier = [self.identity]
        yield self.identity
        while frontier:
            nxt = []
            for w in frontier:
                for i in J:
                    u = self.compose(w, self.generators[i])
                    if u.action not in seen:
                        seen.add(u.action)
                        if len(seen) > self.cap:
                            raise EnumerationTooLarge(f"Weyl group enumeration exceeded the cap of {self.cap}")
                        nxt.append(u)
                        yield u
            frontier = nxt

    def subgroup(self, J: Iterable[int] | None = None) -> tuple[WeylElement, ...]:
        key = frozenset(range(self.rank) if J is None else J)
        cache = self.__dict__.setdefault("_subgroups", {})
        if key not in cache:
            cache[key] = tuple(sorted(self.iter_subgroup(key), key=WeylElement.sort_key))
        return cache[key]

    def elements(self) -> tuple[WeylElement, ...]:
        return self.subgroup(None)

    # -- misc --------------------------------------------------------------

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return "e"
        return "".join(f"s{i}" for i in word)

    def parse_word(self, text: str) -> WeylElement:
        text = text.strip()
        if text in ("", "e", "1"):
            return self.identity
        return self.from_word(int(t) for t in re.findall(r"s?(\d+)", text))

    def __repr__(self) -> str:
        return f"WeylGroup({self.spec.label or self.spec.entries})"


def _perm_order(perm: Sequence[int]) -> int:
    order, p = 1, tuple(perm)
    ident = tuple(range(len(perm)))
    q = p
    while q != ident:
        q = tuple(p[i] for i in q)
        order += 1
    return order


def build(spec: CartanSpec | str, cap: int = ENUMERATION_CAP) -> tuple[RootSystem, WeylGroup]:
    if isinstance(spec, str):
        spec = CartanSpec.from_label(spec)
    roots = RootSystem(spec)
    return roots, WeylGroup(roots, cap=cap)
