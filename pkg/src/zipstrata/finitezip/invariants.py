"""Geometric invariants of points under the zip action.

``W1 = <e_0..e_{k-1}>`` is stable under ``P`` and ``W2 = <e_k..e_{n-1}>``
under ``Q`` (``k = n - d``).  A subspace is *P-side* if the action of
``(p, q)`` moves it by ``p``, *Q-side* if by ``q``.  Six operations preserve
that bookkeeping for ``g' = p g q^{-1}``:

* ``g^{-1} S`` turns a P-side ``S`` into a Q-side space and ``g T`` goes back;
* ``F(S ∩ W1) + W2`` and ``F(image of S in k^n / W1)`` are Q-side;
* ``F^{-1}(image of T in k^n / W2)`` and ``W1 + F^{-1}(T ∩ W2)`` are P-side;

because ``q`` acts on ``k^n/W2`` and ``W2`` through ``F`` of the blocks by
which ``p`` acts on ``W1`` and ``k^n/W1``.  The dimension of the space reached
by a fixed word in these operations is therefore constant on geometric
orbits, and equal signatures are necessary for two points to be
``E``-conjugate over any extension.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .instance import FiniteZipInstance

__all__ = ["Subspaces", "signature", "WORD_DEPTH"]

WORD_DEPTH = 6


class Subspaces:
    """Row-reduced subspace arithmetic over the instance field."""

    def __init__(self, inst: FiniteZipInstance):
        self.inst = inst
        f = inst.field
        self.f = f
        self.n = inst.n
        self.frob_inv = f.frob_inverse

    def rref(self, rows, width: int | None = None) -> tuple[tuple[int, ...], ...]:
        f = self.f
        width = self.n if width is None else width
        a = np.array(rows, dtype=np.uint8).reshape(-1, width).copy()
        r = 0
        for c in range(width):
            piv = next((i for i in range(r, len(a)) if a[i, c]), None)
            if piv is None:
                continue
            a[[r, piv]] = a[[piv, r]]
            a[r] = f.mul[f.inv[a[r, c]], a[r]]
            for i in range(len(a)):
                if i != r and a[i, c]:
                    a[i] = f.sub[a[i], f.mul[a[i, c], a[r]]]
            r += 1
        return tuple(tuple(int(x) for x in row) for row in a[:r])

    def span(self, *spaces) -> tuple:
        rows = [row for s in spaces for row in s]
        return self.rref(rows) if rows else ()

    def intersect(self, a, b) -> tuple:
        """``a ∩ b`` via the kernel of ``[a; -b]`` on the left."""
        if not a or not b:
            return ()
        f = self.f
        A = np.array(a, dtype=np.uint8)
        B = np.array(b, dtype=np.uint8)
        stacked = np.concatenate([A, f.neg[B]])  # rows: x A - y B = 0
        m = len(stacked)
        aug = np.concatenate([stacked, np.eye(m, dtype=np.uint8)], axis=1)
        red = np.array(self.rref(aug, self.n + m), dtype=np.uint8).reshape(-1, self.n + m)
        kernel = red[~np.any(red[:, : self.n], axis=1), self.n:]
        if len(kernel) == 0:
            return ()
        coeffs = kernel[:, : len(A)]
        out = []
        for c in coeffs:
            v = np.zeros(self.n, dtype=np.uint8)
            for coef, row in zip(c, A):
                v = f.add[v, f.mul[coef, row]]
            out.append(v)
        return self.rref(out) if out else ()

    def apply(self, g: np.ndarray, s) -> tuple:
        """Image of a subspace (rows are vectors) under ``v -> g v``."""
        if not s:
            return ()
        return self.rref(self.inst.alg.matmul(np.array(s, dtype=np.uint8), g.T))

    def frob(self, s, inverse: bool = False) -> tuple:
        if not s:
            return ()
        table = self.frob_inv if inverse else self.f.frob
        return self.rref(table[np.array(s, dtype=np.uint8)])

    def coordinate(self, idx) -> tuple:
        rows = []
        for i in idx:
            v = [0] * self.n
            v[i] = 1
            rows.append(v)
        return self.rref(rows) if rows else ()

    def project(self, s, keep) -> tuple:
        """Image in the coordinate quotient that keeps the coordinates ``keep``."""
        if not s:
            return ()
        a = np.array(s, dtype=np.uint8).copy()
        drop = [i for i in range(self.n) if i not in keep]
        a[:, drop] = 0
        return self.rref(a)


def signature(inst: FiniteZipInstance, g: np.ndarray, depth: int = WORD_DEPTH) -> tuple[int, ...]:
    """Dimensions of the spaces reached from ``W1`` and ``W2`` by every word of length ``<= depth``."""
    sp = Subspaces(inst)
    k, n = inst.split, inst.n
    W1 = sp.coordinate(range(k))
    W2 = sp.coordinate(range(k, n))
    first, last = list(range(k)), list(range(k, n))
    g = np.asarray(g, dtype=np.uint8)
    g_inv = inst.alg.inv(g)

    @lru_cache(maxsize=None)
    def step(side: str, space: tuple, op: int) -> tuple[str, tuple]:
        if side == "P":
            if op == 0:
                return "Q", sp.apply(g_inv, space)
            if op == 1:
                return "Q", sp.span(sp.frob(sp.intersect(space, W1)), W2)
            return "Q", sp.frob(sp.project(sp.span(space, W1), last))
        if op == 0:
            return "P", sp.apply(g, space)
        if op == 1:
            return "P", sp.frob(sp.project(sp.span(space, W2), first), inverse=True)
        return "P", sp.span(W1, sp.frob(sp.intersect(space, W2), inverse=True))

    out = []
    for start in (("P", W1), ("Q", W2)):
        frontier = [start]
        for _ in range(depth):
            nxt = []
            for side, space in frontier:
                for op in range(3):
                    res = step(side, space, op)
                    out.append(len(res[1]))
                    nxt.append(res)
            frontier = nxt
    return tuple(out)

