"""Time the compiled and numpy orbit kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Every backend is run on the same point set and generator moves; the script
also asserts that all backends return identical codes and components.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zipstrata.finitezip import build_instance, kernels

CASES = [
    ("GL_3(F_4), d=1, on G", dict(n=3, d=1, p=2, m=2), False),
    ("GL_3(F_8)/V, d=1", dict(n=3, d=1, p=2, m=3), True),
    ("GL_2(F_81)/V, d=1", dict(n=2, d=1, p=3, m=4), True),
]


def _moves(inst, quotient):
    alg = inst.alg
    moves = [(u, None) for u in inst.U_generators]
    if not quotient:
        moves += [(None, alg.inv(v)) for v in inst.V_generators]
    moves += [(ell, alg.inv(inst.phi(ell))) for ell in inst.L_generators]
    return moves


def _run(impl, inst, pts, codes, moves, split):
    f = inst.field
    t0 = time.perf_counter()
    src, dst = [], []
    for left, right in moves:
        img = impl.transform_codes(pts, left, right, split, f.add, f.mul, f.sub, f.inv, inst.alg.weights)
        src.append(np.arange(len(pts), dtype=np.int64))
        dst.append(np.searchsorted(codes, img))
    t1 = time.perf_counter()
    labels = impl.components(len(pts), np.concatenate(src), np.concatenate(dst))
    t2 = time.perf_counter()
    return np.concatenate(dst), labels, t1 - t0, t2 - t1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    impls = kernels.implementations()
    print(f"backends: {', '.join(impls)} (selected at import: {kernels.IMPLEMENTATION})")
    print(f"{'case':<24} {'points':>9} {'moves':>6} " + " ".join(f"{name + ' s':>12}" for name in impls)
          + "   speedup")
    for name, params, quotient in CASES:
        inst = build_instance(**params, lazy=True)
        pts = inst.quotient_points if quotient else inst.G_points
        codes = inst.quotient_codes if quotient else inst.G_codes
        split = inst.split if quotient else 0
        moves = _moves(inst, quotient)
        best, reference = {}, None
        for key, impl in impls.items():
            times = []
            for _ in range(args.repeat):
                dst, labels, t_move, t_comp = _run(impl, inst, pts, codes, moves, split)
                times.append(t_move + t_comp)
            best[key] = min(times)
            if reference is None:
                reference = (dst, labels)
            elif not (np.array_equal(reference[0], dst) and np.array_equal(reference[1], labels)):
                raise SystemExit(f"{name}: backend {key} disagrees with {next(iter(impls))}")
        speed = f"{best['python'] / best['cython']:8.1f}x" if "cython" in best else "      n/a"
        print(f"{name:<24} {len(pts):>9} {len(moves):>6} " + " ".join(f"{best[k]:>12.3f}" for k in impls)
              + f"  {speed}")


if __name__ == "__main__":
    main()
