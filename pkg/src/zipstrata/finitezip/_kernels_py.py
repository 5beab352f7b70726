"""Pure numpy/scipy implementations of the orbit kernels.

Selected automatically when the compiled extension is missing.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

IMPLEMENTATION = "python"


def _matmul(a, b, add, mul):
    terms = mul[a[..., :, :, None], b[..., None, :, :]]
    acc = terms[..., 0, :]
    for k in range(1, terms.shape[-2]):
        acc = add[acc, terms[..., k, :]]
    return acc


def v_reduce(mats, split, add, mul, sub, inv):
    """Canonical representative of ``h V`` for each ``h`` in the batch.

    ``V`` adds combinations of the columns ``split:`` to the columns ``:split``.
    The result has zeros in the pivot rows of the reduced column echelon form
    of the last block.
    """
    h = np.array(mats, dtype=np.uint8, copy=True)
    N, n, _ = h.shape
    d = n - split
    if split <= 0 or d <= 0:
        return h
    E = h[:, :, split:].copy()
    pivot_col = np.full((N, n), -1, dtype=np.int64)
    avail = np.ones((N, d), dtype=bool)
    for i in range(n):
        cand = (E[:, i, :] != 0) & avail
        rows = np.nonzero(cand.any(axis=1))[0]
        if rows.size == 0:
            continue
        c = np.argmax(cand[rows], axis=1)
        col = E[rows, :, c]
        col = mul[inv[col[:, i]][:, None], col]
        E[rows, :, c] = col
        for c2 in range(d):
            other = rows[c != c2]
            if other.size == 0:
                continue
            colo = col[c != c2]
            fac = E[other, i, c2][:, None]
            E[other, :, c2] = sub[E[other, :, c2], mul[fac, colo]]
        avail[rows, c] = False
        pivot_col[rows, i] = c
    h1 = h[:, :, :split]
    for i in range(n):
        rows = np.nonzero(pivot_col[:, i] >= 0)[0]
        if rows.size == 0:
            continue
        col = E[rows, :, pivot_col[rows, i]]  # (r, n)
        fac = h1[rows, i, :]  # (r, split)
        h1[rows] = sub[h1[rows], mul[col[:, :, None], fac[:, None, :]]]
    h[:, :, :split] = h1
    return h


def transform_codes(mats, left, right, split, add, mul, sub, inv, weights, chunk=1 << 18):
    """Codes of ``canon(left @ M @ right)`` for a batch of matrices ``M``.

    ``left``/``right`` may be ``None``; ``split <= 0`` skips the ``V`` reduction.
    """
    N = len(mats)
    out = np.empty(N, dtype=np.int64)
    for start in range(0, N, chunk):
        x = mats[start:start + chunk]
        if left is not None:
            x = _matmul(left, x, add, mul)
        if right is not None:
            x = _matmul(x, right, add, mul)
        if split > 0:
            x = v_reduce(x, split, add, mul, sub, inv)
        out[start:start + chunk] = x.reshape(len(x), -1).astype(np.int64) @ weights
    return out


def components(n_nodes, src, dst):
    """Connected components; each node is labelled by the least index in its class."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n_nodes, n_nodes))
    _, lab = connected_components(graph, directed=True, connection="weak")
    least = np.full(lab.max() + 1 if n_nodes else 0, n_nodes, dtype=np.int64)
    np.minimum.at(least, lab, np.arange(n_nodes, dtype=np.int64))
    return least[lab]
