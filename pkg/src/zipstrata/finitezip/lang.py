"""The Lang map ``g -> g x0 F(g)^{-1}`` on ``GL_n`` over a finite field.

``F`` is the entrywise ``q``-power Frobenius of the instance field.  Two
points share an image exactly when they differ on the right by an element
fixed by ``F' = int(x0) ∘ F``, so every nonempty fiber is a coset of
``G^{F'}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import FiniteZipInstance

__all__ = ["lang_map", "fixed_points", "LangReport", "lang_fiber_check"]


def _frobenius(inst: FiniteZipInstance, x: np.ndarray, power: int = 1) -> np.ndarray:
    return inst.alg.frobenius(x, power)


def lang_map(inst: FiniteZipInstance, x0: np.ndarray | None = None,
             power: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Codes of ``G(F_s)`` and of their images, aligned.

    ``power`` selects ``F^power`` as the Frobenius.
    """
    alg = inst.alg
    x0 = alg.identity() if x0 is None else np.asarray(x0, dtype=np.uint8)
    G = inst.G_points
    images = alg.product(G, x0, alg.inv(_frobenius(inst, G, power)))
    return inst.G_codes, alg.encode(images)


def fixed_points(inst: FiniteZipInstance, x0: np.ndarray | None = None, power: int = 1) -> np.ndarray:
    """``{g : g = x0 F(g) x0^{-1}}`` as an array, after checking it is a subgroup.

    With ``x0 = 1`` this is ``G^F``.
    """
    alg = inst.alg
    x0 = alg.identity() if x0 is None else np.asarray(x0, dtype=np.uint8)
    G = inst.G_points
    twisted = alg.product(x0, _frobenius(inst, G, power), alg.inv(x0))
    fixed = G[np.all(twisted == G, axis=(-2, -1))]
    codes = set(alg.encode(fixed).tolist())
    if alg.encode(alg.identity()[None])[0] not in codes:
        raise AssertionError("fixed points do not contain the identity")
    for a in fixed:
        if not set(alg.encode(alg.matmul(a, fixed)).tolist()) <= codes:
            raise AssertionError("fixed points are not closed under multiplication")
    return fixed


@dataclass(frozen=True)
class LangReport:
    points: int
    image: int
    fiber_sizes: tuple[int, ...]
    fixed_order: int

    @property
    def passed(self) -> bool:
        return self.fiber_sizes == (self.fixed_order,) and self.image * self.fixed_order == self.points

    def to_dict(self) -> dict:
        return {
            "points": self.points,
            "image": self.image,
            "fiber_sizes": list(self.fiber_sizes),
            "twisted_fixed_order": self.fixed_order,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def lang_fiber_check(inst: FiniteZipInstance, x0: np.ndarray | None = None, power: int = 1) -> LangReport:
    """Fiber sizes of the Lang map against ``|G^{F'}|``."""
    _, images = lang_map(inst, x0, power)
    _, counts = np.unique(images, return_counts=True)
    fixed = fixed_points(inst, x0, power)
    return LangReport(len(images), len(counts), tuple(sorted(set(counts.tolist()))), len(fixed))
