"""Batched matrix arithmetic over a :class:`FiniteField` and point enumeration.

Matrices are ``uint8`` arrays of shape ``(..., n, n)`` holding encoded field
elements.  A matrix is identified with the integer whose base-``s`` digits are
its entries in row-major order, first entry most significant, so sorting codes
sorts matrices lexicographically.
"""

from __future__ import annotations

from itertools import product
from math import prod

import numpy as np

from .field import FiniteField

__all__ = [
    "TooLarge",
    "ENUMERATION_CAP",
    "MatrixAlgebra",
    "gl_order",
]

ENUMERATION_CAP = 10**7


class TooLarge(RuntimeError):
    pass


def gl_order(n: int, s: int) -> int:
    return prod(s**n - s**i for i in range(n))


class MatrixAlgebra:
    """``n x n`` matrices over ``field``."""

    def __init__(self, field: FiniteField, n: int):
        self.field, self.n = field, n
        s = field.size
        if s ** (n * n) >= 2**63:
            raise TooLarge(f"{n}x{n} matrices over F_{s} do not fit 64-bit codes")
        self.weights = np.array([s ** (n * n - 1 - k) for k in range(n * n)], dtype=np.int64)

    # -- codes ---------------------------------------------------------

    def encode(self, mats: np.ndarray) -> np.ndarray:
        flat = np.asarray(mats).reshape(*np.shape(mats)[:-2], self.n * self.n).astype(np.int64)
        return flat @ self.weights

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        s = self.field.size
        out = np.empty(codes.shape + (self.n * self.n,), dtype=np.uint8)
        rest = codes.copy()
        for k in range(self.n * self.n - 1, -1, -1):
            out[..., k] = rest % s
            rest //= s
        return out.reshape(codes.shape + (self.n, self.n))

    # -- arithmetic ----------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.uint8)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        add, mul = self.field.add, self.field.mul
        terms = mul[a[..., :, :, None], b[..., None, :, :]]  # (..., i, k, j)
        acc = terms[..., 0, :]
        for k in range(1, terms.shape[-2]):
            acc = add[acc, terms[..., k, :]]
        return acc

    def product(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def frobenius(self, a: np.ndarray, power: int = 1) -> np.ndarray:
        for _ in range(power):
            a = self.field.frob[a]
        return a

    def inverse(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Jordan on a batch; returns ``(inverses, invertible_mask)``."""
        f = self.field
        a = np.array(a, dtype=np.uint8)
        batch = a.shape[:-2]
        n = self.n
        A = a.reshape(-1, n, n).copy()
        N = A.shape[0]
        I = np.broadcast_to(np.eye(n, dtype=np.uint8), (N, n, n)).copy()
        ok = np.ones(N, dtype=bool)
        idx = np.arange(N)
        for c in range(n):
            mask = A[:, c:, c] != 0
            has = mask.any(axis=1)
            ok &= has
            piv = c + np.argmax(mask, axis=1)
            for M in (A, I):
                rc = M[idx, c].copy()
                M[idx, c] = M[idx, piv]
                M[idx, piv] = rc
            scale = f.inv[A[:, c, c]][:, None]
            A[:, c] = f.mul[scale, A[:, c]]
            I[:, c] = f.mul[scale, I[:, c]]
            for r in range(n):
                if r == c:
                    continue
                fac = A[:, r, c][:, None].copy()
                A[:, r] = f.sub[A[:, r], f.mul[fac, A[:, c]]]
                I[:, r] = f.sub[I[:, r], f.mul[fac, I[:, c]]]
        return I.reshape(batch + (n, n)), ok.reshape(batch)

    def inv(self, a: np.ndarray) -> np.ndarray:
        out, ok = self.inverse(a)
        if not np.all(ok):
            raise ValueError("singular matrix")
        return out

    def conj(self, g: np.ndarray, a: np.ndarray) -> np.ndarray:
        """``g a g^{-1}``."""
        return self.product(g, a, self.inv(g))

    def is_invertible(self, a: np.ndarray) -> np.ndarray:
        return self.inverse(a)[1]

    # -- shapes ----------------------------------------------------------

    def elementary(self, i: int, j: int, a: int) -> np.ndarray:
        e = self.identity()
        e[i, j] = a
        return e

    def diagonal(self, entries) -> np.ndarray:
        e = np.zeros((self.n, self.n), dtype=np.uint8)
        e[np.arange(self.n), np.arange(self.n)] = entries
        return e

    def permutation_matrix(self, perm) -> np.ndarray:
        """Matrix sending basis vector ``e_j`` to ``e_{perm[j]}``."""
        e = np.zeros((self.n, self.n), dtype=np.uint8)
        e[list(perm), np.arange(self.n)] = 1
        return e

    # -- enumeration -----------------------------------------------------

    def all_vectors(self, k: int) -> np.ndarray:
        s = self.field.size
        return np.array(list(product(range(s), repeat=k)), dtype=np.uint8).reshape(-1, k)

    def full_rank_rows(self, k: int, width: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
        """All ``k x width`` matrices of rank ``k``, lexicographically sorted."""
        f = self.field
        s = f.size
        count = prod(s**width - s**i for i in range(k))
        if count > cap:
            raise TooLarge(f"{count} full-rank {k}x{width} matrices over F_{s} exceed the cap {cap}")
        vecs = self.all_vectors(width)
        vweights = np.array([s ** (width - 1 - c) for c in range(width)], dtype=np.int64)
        partial = vecs[1:][:, None, :]
        if k == 0:
            return np.zeros((1, 0, width), dtype=np.uint8)
        for r in range(1, k):
            coeffs = self.all_vectors(r)  # (s^r, r)
            terms = f.mul[coeffs[None, :, :, None], partial[:, None, :, :]]  # (M, s^r, r, width)
            span = terms[:, :, 0, :]
            for t in range(1, r):
                span = f.add[span, terms[:, :, t, :]]
            span_codes = span.astype(np.int64) @ vweights
            blocked = np.zeros((partial.shape[0], len(vecs)), dtype=bool)
            blocked[np.arange(partial.shape[0])[:, None], span_codes] = True
            mi, vi = np.nonzero(~blocked)
            partial = np.concatenate([partial[mi], vecs[vi][:, None, :]], axis=1)
        return partial

    def general_linear(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        return self.full_rank_rows(self.n, self.n, cap)
