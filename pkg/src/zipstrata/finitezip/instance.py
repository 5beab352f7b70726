"""The ``GL_n`` zip datum of a minuscule cocharacter over a finite field.

For ``chi(t) = diag(t,...,t,1,...,1)`` with ``t`` repeated ``n - d`` times:

* ``P`` is block upper triangular of shape ``(n-d, d)`` with radical ``U``;
* ``Q`` is block lower triangular of the same shape with radical ``V``;
* ``L = M`` is the block diagonal Levi and ``phi`` the entrywise ``q``-power map;
* ``E = {(p, q) : phi(Levi(p)) = Levi(q)}`` acts on ``G`` by ``g -> p g q^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations, product

import numpy as np

from . import kernels
from .field import FiniteField
from .matrices import ENUMERATION_CAP, MatrixAlgebra, TooLarge, gl_order

__all__ = [
    "InvalidShape",
    "FiniteZipInstance",
    "build_instance",
    "weyl_matrix",
]


class InvalidShape(ValueError):
    pass


def weyl_matrix(alg: MatrixAlgebra, w) -> np.ndarray:
    """Permutation matrix of a Weyl element of type ``A_{n-1}`` (node ``i`` swaps ``i, i+1``)."""
    out = alg.identity()
    for i in w.word:
        perm = list(range(alg.n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        out = alg.matmul(out, alg.permutation_matrix(perm))
    return out


def _blocks(field_: FiniteField, k: int, cap: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0, 0), dtype=np.uint8)
    return MatrixAlgebra(field_, k).general_linear(cap)


@dataclass(eq=False)
class FiniteZipInstance:
    n: int
    d: int
    field: FiniteField
    cap: int = ENUMERATION_CAP
    frame_g: np.ndarray | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if not 0 <= self.d <= self.n or self.n < 1:
            raise InvalidShape(f"need 0 <= d <= n and n >= 1, got n={self.n}, d={self.d}")
        self.alg = MatrixAlgebra(self.field, self.n)

    # -- shape -----------------------------------------------------------

    @property
    def split(self) -> int:
        """Size of the first diagonal block."""
        return self.n - self.d

    @property
    def proper(self) -> bool:
        return 0 < self.d < self.n

    @property
    def s(self) -> int:
        return self.field.size

    @property
    def J(self) -> tuple[int, ...]:
        """Frame type of ``P``: every node except ``d - 1``."""
        return tuple(i for i in range(self.n - 1) if i != self.d - 1)

    @property
    def K(self) -> tuple[int, ...]:
        """Type of ``Q``: every node except ``n - d - 1``."""
        return tuple(i for i in range(self.n - 1) if i != self.n - self.d - 1)

    # -- orders ----------------------------------------------------------

    @property
    def order_G(self) -> int:
        return gl_order(self.n, self.s)

    @property
    def order_V(self) -> int:
        return self.s ** (self.d * self.split) if self.proper else 1

    @property
    def order_L(self) -> int:
        return gl_order(self.split, self.s) * gl_order(self.d, self.s)

    @property
    def order_P(self) -> int:
        return self.order_L * self.order_V

    @property
    def order_E(self) -> int:
        return self.order_P * self.order_V

    @property
    def order_quotient(self) -> int:
        """``|G / V|``."""
        return self.order_G // self.order_V

    @property
    def dim_P(self) -> int:
        return self.n * self.n - self.d * self.split

    @property
    def dim_E(self) -> int:
        return self.n * self.n

    # -- membership and decompositions -----------------------------------

    def in_P(self, x: np.ndarray) -> np.ndarray:
        return ~np.any(x[..., self.split:, : self.split], axis=(-2, -1))

    def in_Q(self, x: np.ndarray) -> np.ndarray:
        return ~np.any(x[..., : self.split, self.split:], axis=(-2, -1))

    def in_L(self, x: np.ndarray) -> np.ndarray:
        return self.in_P(x) & self.in_Q(x)

    def levi_part(self, x: np.ndarray) -> np.ndarray:
        out = np.array(x, copy=True)
        out[..., : self.split, self.split:] = 0
        out[..., self.split:, : self.split] = 0
        return out

    def levi_decompose(self, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``p = u l`` with ``u`` in ``U`` and ``l`` in ``L``."""
        if not np.all(self.in_P(p)):
            raise ValueError("element is not in P")
        ell = self.levi_part(p)
        u = self.alg.matmul(p, self.alg.inv(ell))
        return u, ell

    def q_decompose(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``x = v m`` with ``v`` in ``V`` and ``m`` in ``M``."""
        if not np.all(self.in_Q(x)):
            raise ValueError("element is not in Q")
        m = self.levi_part(x)
        v = self.alg.matmul(x, self.alg.inv(m))
        return v, m

    def phi(self, x: np.ndarray) -> np.ndarray:
        return self.alg.frobenius(x)

    def act(self, pair: tuple[np.ndarray, np.ndarray], g: np.ndarray) -> np.ndarray:
        p, q = pair
        return self.alg.product(p, g, self.alg.inv(q))

    def e_multiply(self, a, b):
        return self.alg.matmul(a[0], b[0]), self.alg.matmul(a[1], b[1])

    def in_E(self, pair) -> np.ndarray:
        p, q = pair
        return self.in_P(p) & self.in_Q(q) & np.all(
            self.phi(self.levi_part(p)) == self.levi_part(q), axis=(-2, -1)
        )

    # -- generators ------------------------------------------------------

    def _transvections(self, rows, cols) -> list[np.ndarray]:
        return [
            self.alg.elementary(i, j, a)
            for i in rows
            for j in cols
            if i != j
            for a in self.field.additive_basis
        ]

    @cached_property
    def U_generators(self) -> list[np.ndarray]:
        return self._transvections(range(self.split), range(self.split, self.n))

    @cached_property
    def V_generators(self) -> list[np.ndarray]:
        return self._transvections(range(self.split, self.n), range(self.split))

    @cached_property
    def L_generators(self) -> list[np.ndarray]:
        gens = []
        zeta = self.field.generator
        for block in (range(self.split), range(self.split, self.n)):
            if len(block) == 0:
                continue
            gens += self._transvections(block, block)
            diag = [1] * self.n
            diag[block[0]] = zeta
            gens.append(self.alg.diagonal(diag))
        return gens

    def E_generators(self) -> list[tuple[np.ndarray, np.ndarray]]:
        one = self.alg.identity()
        out = [(u, one) for u in self.U_generators]
        out += [(one, v) for v in self.V_generators]
        out += [(ell, self.phi(ell)) for ell in self.L_generators]
        return out

    # -- point sets ------------------------------------------------------

    def _check_cap(self, count: int, what: str) -> None:
        if count > self.cap:
            raise TooLarge(f"{what} has {count} points over F_{self.s}, above the cap {self.cap}")

    @cached_property
    def G_points(self) -> np.ndarray:
        self._check_cap(self.order_G, "GL_n")
        return self.alg.general_linear(self.cap)

    @cached_property
    def G_codes(self) -> np.ndarray:
        return self.alg.encode(self.G_points)

    def _block_matrices(self, upper: bool, unipotent: bool) -> np.ndarray:
        n, k = self.n, self.split
        if unipotent:
            A = np.eye(k, dtype=np.uint8)[None]
            D = np.eye(self.d, dtype=np.uint8)[None]
        else:
            A = _blocks(self.field, k, self.cap)
            D = _blocks(self.field, self.d, self.cap)
        shape = (k, self.d) if upper else (self.d, k)
        off = np.array(list(product(range(self.s), repeat=k * self.d)), dtype=np.uint8)
        off = off.reshape((self.s ** (k * self.d),) + shape)
        ia, io, idd = (g.ravel() for g in np.meshgrid(np.arange(len(A)), np.arange(len(off)), np.arange(len(D)), indexing="ij"))
        out = np.zeros((len(ia), n, n), dtype=np.uint8)
        out[:, :k, :k] = A[ia]
        out[:, k:, k:] = D[idd]
        if upper:
            out[:, :k, k:] = off[io]
        else:
            out[:, k:, :k] = off[io]
        order = np.argsort(self.alg.encode(out), kind="stable")
        return out[order]

    @cached_property
    def P_points(self) -> np.ndarray:
        self._check_cap(self.order_P, "P")
        return self._block_matrices(upper=True, unipotent=False)

    @cached_property
    def Q_points(self) -> np.ndarray:
        self._check_cap(self.order_P, "Q")
        return self._block_matrices(upper=False, unipotent=False)

    @cached_property
    def U_points(self) -> np.ndarray:
        return self._block_matrices(upper=True, unipotent=True)

    @cached_property
    def V_points(self) -> np.ndarray:
        return self._block_matrices(upper=False, unipotent=True)

    @cached_property
    def L_points(self) -> np.ndarray:
        self._check_cap(self.order_L, "L")
        pts = self.P_points
        return pts[self.in_L(pts)]

    @cached_property
    def E_points(self) -> tuple[np.ndarray, np.ndarray]:
        """All ``(p, q)`` with ``q = phi(Levi(p)) v`` for ``v`` in ``V``."""
        self._check_cap(self.order_E, "E")
        P = self.P_points
        phil = self.phi(self.levi_part(P))
        V = self.V_points
        ip, iv = (g.ravel() for g in np.meshgrid(np.arange(len(P)), np.arange(len(V)), indexing="ij"))
        return P[ip], self.alg.matmul(phil[ip], V[iv])

    # -- the quotient G / V ----------------------------------------------

    def v_canonical(self, mats: np.ndarray) -> np.ndarray:
        f = self.field
        return kernels.v_reduce(np.asarray(mats, dtype=np.uint8).reshape(-1, self.n, self.n),
                                self.split if self.proper else 0, f.add, f.mul, f.sub, f.inv)

    @cached_property
    def quotient_points(self) -> np.ndarray:
        """Canonical representatives of ``G / V``, lexicographically sorted."""
        if not self.proper:
            return self.G_points
        self._check_cap(self.order_quotient, "G/V")
        n, k, d = self.n, self.split, self.d
        f = self.field
        h2_rows = MatrixAlgebra(f, n).full_rank_rows(d, n, self.cap)  # (N, d, n)
        h2 = np.transpose(h2_rows, (0, 2, 1))  # (N, n, d)
        pivots = np.full(len(h2), -1, dtype=np.int64)
        subsets = list(combinations(range(n), d))
        small = MatrixAlgebra(f, d)
        for idx, R in enumerate(subsets):
            todo = pivots < 0
            if not todo.any():
                break
            ok = small.is_invertible(h2[todo][:, list(R), :])
            sel = np.nonzero(todo)[0][ok]
            pivots[sel] = idx
        free_vals = np.array(list(product(range(self.s), repeat=k * k)), dtype=np.uint8).reshape(-1, k, k)
        pieces = []
        for idx, R in enumerate(subsets):
            grp = h2[pivots == idx]
            if len(grp) == 0:
                continue
            free = [r for r in range(n) if r not in R]
            ig, iv = (g.ravel() for g in np.meshgrid(np.arange(len(grp)), np.arange(len(free_vals)), indexing="ij"))
            cand = np.zeros((len(ig), n, n), dtype=np.uint8)
            cand[:, :, k:] = grp[ig]
            cand[:, free, :k] = free_vals[iv]
            pieces.append(cand[self.alg.is_invertible(cand)])
        pts = np.concatenate(pieces)
        order = np.argsort(self.alg.encode(pts), kind="stable")
        pts = pts[order]
        if len(pts) != self.order_quotient:
            raise RuntimeError(f"enumerated {len(pts)} cosets of V, expected {self.order_quotient}")
        return pts

    @cached_property
    def quotient_codes(self) -> np.ndarray:
        return self.alg.encode(self.quotient_points)

    # -- invariants ------------------------------------------------------

    def verify(self) -> None:
        """Check enumerated orders against closed forms and the uniqueness of ``p = u l``."""
        checks = [("G", len(self.G_points), self.order_G), ("P", len(self.P_points), self.order_P),
                  ("Q", len(self.Q_points), self.order_P), ("U", len(self.U_points), self.order_V),
                  ("V", len(self.V_points), self.order_V)]
        if self.order_E <= self.cap:
            checks.append(("E", len(self.E_points[0]), self.order_E))
        for name, got, want in checks:
            if got != want:
                raise RuntimeError(f"|{name}| = {got} but the closed form gives {want}")
        u, ell = self.levi_decompose(self.P_points)
        if not (np.all(self.in_P(u)) and np.all(self.in_L(ell))):
            raise RuntimeError("Levi decomposition left its subgroups")
        if not np.all(self.levi_part(u) == self.alg.identity()):
            raise RuntimeError("U component is not unipotent")
        if not np.array_equal(self.alg.matmul(u, ell), self.P_points):
            raise RuntimeError("p != u l")


def build_instance(n: int, d: int, p: int, m: int = 1, q: int | None = None, *,
                   cap: int = ENUMERATION_CAP, lazy: bool = False) -> FiniteZipInstance:
    """The ``GL_n`` zip instance over ``F_{p^m}``.

    Unless ``lazy``, the group is enumerated and its invariants verified, which
    requires ``|GL_n(F_{p^m})| <= cap``.  A lazy instance only enumerates what
    is asked for, each point set checked against the cap separately.
    """
    if not 0 <= d <= n or n < 1:
        raise InvalidShape(f"need 0 <= d <= n and n >= 1, got n={n}, d={d}")
    inst = FiniteZipInstance(n, d, FiniteField(p, m, q), cap)
    if not lazy:
        if inst.order_G > cap:
            raise TooLarge(f"|GL_{n}(F_{p ** m})| = {inst.order_G} exceeds the cap {cap}")
        inst.verify()
    return inst
