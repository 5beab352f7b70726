# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

IMPLEMENTATION = "cython"

cdef enum:
    MAXN = 8


cdef inline void _mul_into(const unsigned char[:, :] add, const unsigned char[:, :] mul,
                           unsigned char* a, unsigned char* b, unsigned char* out, int n) noexcept nogil:
    cdef int i, j, k
    cdef unsigned char acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
            out[i * n + j] = acc


cdef inline void _v_reduce_one(unsigned char* h, int n, int split,
                               const unsigned char[:, :] mul, const unsigned char[:, :] sub,
                               const unsigned char[:] inv) noexcept nogil:
    cdef int d = n - split
    cdef unsigned char E[MAXN * MAXN]
    cdef int pivot[MAXN]
    cdef int used[MAXN]
    cdef int i, j, c, c2, r
    cdef unsigned char a, fac
    for i in range(n):
        pivot[i] = -1
        for c in range(d):
            E[i * d + c] = h[i * n + split + c]
    for c in range(d):
        used[c] = 0
    for i in range(n):
        c = -1
        for c2 in range(d):
            if not used[c2] and E[i * d + c2] != 0:
                c = c2
                break
        if c < 0:
            continue
        a = inv[E[i * d + c]]
        for r in range(n):
            E[r * d + c] = mul[a, E[r * d + c]]
        for c2 in range(d):
            if c2 != c:
                fac = E[i * d + c2]
                if fac:
                    for r in range(n):
                        E[r * d + c2] = sub[E[r * d + c2], mul[fac, E[r * d + c]]]
        used[c] = 1
        pivot[i] = c
    for i in range(n):
        c = pivot[i]
        if c < 0:
            continue
        for j in range(split):
            fac = h[i * n + j]
            if fac:
                for r in range(n):
                    h[r * n + j] = sub[h[r * n + j], mul[E[r * d + c], fac]]


def v_reduce(mats, int split, add, mul, sub, inv):
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] h = np.array(mats, dtype=np.uint8, copy=True, order="C")
    cdef Py_ssize_t N = h.shape[0], t
    cdef int n = h.shape[1]
    cdef const unsigned char[:, :] mulv = mul
    cdef const unsigned char[:, :] subv = sub
    cdef const unsigned char[:] invv = inv
    if n > MAXN:
        raise ValueError("matrix size above compiled limit")
    if split <= 0 or split >= n:
        return h
    cdef unsigned char* base = <unsigned char*> h.data
    with nogil:
        for t in range(N):
            _v_reduce_one(base + t * n * n, n, split, mulv, subv, invv)
    return h


def transform_codes(mats, left, right, int split, add, mul, sub, inv, weights, chunk=None):
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] src = np.ascontiguousarray(mats, dtype=np.uint8)
    cdef Py_ssize_t N = src.shape[0], t
    cdef int n = src.shape[1], k
    if n > MAXN:
        raise ValueError("matrix size above compiled limit")
    cdef const unsigned char[:, :] addv = add
    cdef const unsigned char[:, :] mulv = mul
    cdef const unsigned char[:, :] subv = sub
    cdef const unsigned char[:] invv = inv
    cdef const long long[:] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] L = np.ascontiguousarray(
        np.eye(n, dtype=np.uint8) if left is None else left, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] R = np.ascontiguousarray(
        np.eye(n, dtype=np.uint8) if right is None else right, dtype=np.uint8)
    cdef bint do_left = left is not None, do_right = right is not None
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(N, dtype=np.int64)
    cdef unsigned char buf1[MAXN * MAXN]
    cdef unsigned char buf2[MAXN * MAXN]
    cdef unsigned char* sp = <unsigned char*> src.data
    cdef unsigned char* lp = <unsigned char*> L.data
    cdef unsigned char* rp = <unsigned char*> R.data
    cdef long long code
    with nogil:
        for t in range(N):
            for k in range(n * n):
                buf1[k] = sp[t * n * n + k]
            if do_left:
                _mul_into(addv, mulv, lp, buf1, buf2, n)
                for k in range(n * n):
                    buf1[k] = buf2[k]
            if do_right:
                _mul_into(addv, mulv, buf1, rp, buf2, n)
                for k in range(n * n):
                    buf1[k] = buf2[k]
            if split > 0 and split < n:
                _v_reduce_one(buf1, n, split, mulv, subv, invv)
            code = 0
            for k in range(n * n):
                code += buf1[k] * w[k]
            out[t] = code
    return out


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def components(Py_ssize_t n_nodes, src, dst):
    cdef const long long[:] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef const long long[:] d = np.ascontiguousarray(dst, dtype=np.int64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] parent = np.arange(n_nodes, dtype=np.intp)
    cdef Py_ssize_t* par = <Py_ssize_t*> parent.data
    cdef Py_ssize_t e, a, b, m = s.shape[0], i
    with nogil:
        for e in range(m):
            a = _find(par, s[e])
            b = _find(par, d[e])
            if a < b:
                par[b] = a
            elif b < a:
                par[a] = b
        for i in range(n_nodes):
            par[i] = _find(par, i)
    return parent.astype(np.int64)
