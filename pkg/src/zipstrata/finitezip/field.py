"""Table-driven arithmetic in small finite fields ``F_{p^m}``.

An element is an integer ``0 <= x < p^m`` whose base-``p`` digits are the
coefficients of a polynomial in the generator ``X`` (least significant digit
first).  The defining polynomial is the smallest monic irreducible one in
that encoding.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product

import numpy as np

__all__ = ["FiniteField", "FieldError", "is_prime"]


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(x % p)
        x //= p
    return out


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``f`` (coefficient lists, low first)."""
    a = list(a)
    df = len(f) - 1
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] % p
        if c:
            for i in range(df + 1):
                a[k - df + i] = (a[k - df + i] - c * f[i]) % p
    return [c % p for c in a[:df]] + [0] * max(0, df - len(a))


def _is_irreducible(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


class FiniteField:
    """``F_{p^m}`` with full addition, multiplication and Frobenius tables.

    ``q`` is the size of the base field whose Frobenius ``x -> x^q`` is used
    for twisting; it defaults to ``p``.
    """

    def __init__(self, p: int, m: int = 1, q: int | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("degree must be positive")
        self.p, self.m = p, m
        self.size = s = p**m
        if s > 256:
            raise FieldError("fields with more than 256 elements are not supported")
        self.q = p if q is None else q
        if not any(p**k == self.q for k in range(1, m + 1) if m % k == 0):
            raise FieldError(f"q={self.q} is not a power of {p} whose field lies in F_{s}")
        self.modulus = self._find_modulus()

        digits = [_digits(x, p, m) for x in range(s)]
        enc = {tuple(d): x for x, d in enumerate(digits)}
        add = np.zeros((s, s), dtype=np.uint8)
        mul = np.zeros((s, s), dtype=np.uint8)
        for a in range(s):
            for b in range(s):
                add[a, b] = enc[tuple((x + y) % p for x, y in zip(digits[a], digits[b]))]
                prod_ = [0] * (2 * m - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod_[i + j] += x * y
                mul[a, b] = enc[tuple(_poly_mod(prod_, self.modulus, p))]
        self.add, self.mul = add, mul
        self.neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(s)], dtype=np.uint8)
        inv = np.zeros(s, dtype=np.uint8)
        for a in range(1, s):
            hits = np.nonzero(mul[a] == 1)[0]
            if len(hits) != 1:
                raise FieldError("defining polynomial is not irreducible")
            inv[a] = hits[0]
        self.inv = inv
        self.sub = add[:, self.neg]
        frob = np.arange(s, dtype=np.uint8)
        base = np.arange(s, dtype=np.uint8)
        for _ in range(self.q - 1):
            frob = mul[frob, base]
        self.frob = frob
        self.frob_inverse = np.argsort(frob).astype(np.uint8)
        self._verify()

    def _find_modulus(self) -> list[int]:
        p, m = self.p, self.m
        if m == 1:
            return [0, 1]
        for code in range(p**m):
            f = _digits(code, p, m) + [1]
            if f[0] and _is_irreducible(f, p):
                return f
        raise FieldError("no irreducible polynomial found")

    def _verify(self) -> None:
        s = self.size
        x = np.arange(s, dtype=np.uint8)
        y = x.copy()
        for _ in range(s - 1):
            y = self.mul[y, x]
        if not np.array_equal(y, x):
            raise FieldError("x^(p^m) != x for some element")

    # ------------------------------------------------------------------

    @property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.add, self.mul, self.neg, self.inv

    @cached_property
    def generator(self) -> int:
        """Smallest generator of the multiplicative group."""
        s = self.size
        for g in range(1, s):
            x, k = g, 1
            while x != 1:
                x = int(self.mul[x, g])
                k += 1
            if k == s - 1:
                return g
        raise FieldError("no multiplicative generator")  # pragma: no cover

    @cached_property
    def additive_basis(self) -> tuple[int, ...]:
        """``1, X, ..., X^{m-1}`` as encoded elements."""
        return tuple(self.p**i for i in range(self.m))

    def power(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = int(self.mul[r, a])
        return r

    def embedding_into(self, other: "FiniteField") -> np.ndarray:
        """Field embedding ``self -> other`` as a lookup array."""
        if other.p != self.p or other.m % self.m:
            raise FieldError(f"F_{self.size} does not embed in F_{other.size}")
        if self.m == 1:
            # prime field: digit c maps to c * 1
            out = np.zeros(self.size, dtype=np.uint8)
            acc = 0
            for c in range(1, self.size):
                acc = int(other.add[acc, 1])
                out[c] = acc
            return out
        prime = FiniteField(self.p, 1).embedding_into(other)
        root = None
        for r in range(other.size):
            val, rpow = 0, 1
            for c in self.modulus:
                val = int(other.add[val, other.mul[prime[c], rpow]])
                rpow = int(other.mul[rpow, r])
            if val == 0:
                root = r
                break
        if root is None:  # pragma: no cover - impossible for m | m'
            raise FieldError("no root of the defining polynomial")
        out = np.zeros(self.size, dtype=np.uint8)
        for x in range(self.size):
            val, rpow = 0, 1
            for c in _digits(x, self.p, self.m):
                val = int(other.add[val, other.mul[prime[c], rpow]])
                rpow = int(other.mul[rpow, root])
            out[x] = val
        return out

    def __repr__(self) -> str:
        return f"FiniteField({self.size}, q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m, self.q) == (other.p, other.m, other.q)

    def __hash__(self):
        return hash((self.p, self.m, self.q))
