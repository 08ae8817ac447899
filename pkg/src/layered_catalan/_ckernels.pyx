# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bounded word-arena union-find and determinants mod p."""

import numpy as np

from libc.stdint cimport int32_t, int64_t


cdef inline int64_t _find(int32_t[::1] parent, int64_t x) noexcept nogil:
    cdef int64_t root = x
    cdef int64_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = <int32_t>root
        x = nxt
    return root


def arena_union_find(int n, int arena_len, lhs, rhs):
    """Union words of length <= arena_len that differ by one relation application.

    ``lhs``/``rhs`` are parallel lists of letter tuples (1-based).  Words are
    indexed shortlex: all words of length l occupy offset[l] .. offset[l]+n**l-1,
    most significant letter first.  Returns int32 labels where each word points
    at the shortlex-least word of its class.
    """
    cdef int nrel = len(lhs)
    cdef int64_t[::1] pw = np.ones(arena_len + 2, dtype=np.int64)
    cdef int64_t[::1] offset = np.zeros(arena_len + 2, dtype=np.int64)
    cdef int k, l, p, j, q, L, R, nl
    for k in range(1, arena_len + 2):
        pw[k] = pw[k - 1] * n
        offset[k] = offset[k - 1] + pw[k - 1]
    cdef int64_t total = offset[arena_len + 1]
    if total > 2**31 - 1:
        raise MemoryError("arena too large for int32 labels")

    maxside = max([len(s) for s in list(lhs) + list(rhs)] + [1])
    cdef int32_t[:, ::1] lhs_d = np.zeros((max(nrel, 1), maxside), dtype=np.int32)
    cdef int32_t[::1] lhs_len = np.zeros(max(nrel, 1), dtype=np.int32)
    cdef int32_t[::1] rhs_len = np.zeros(max(nrel, 1), dtype=np.int32)
    cdef int64_t[::1] rhs_val = np.zeros(max(nrel, 1), dtype=np.int64)
    for j in range(nrel):
        lhs_len[j] = len(lhs[j])
        rhs_len[j] = len(rhs[j])
        for q in range(len(lhs[j])):
            lhs_d[j, q] = lhs[j][q] - 1
        v = 0
        for a in rhs[j]:
            v = v * n + (a - 1)
        rhs_val[j] = v

    parent_np = np.arange(total, dtype=np.int32)
    cdef int32_t[::1] parent = parent_np
    cdef int32_t[::1] buf = np.zeros(arena_len + 1, dtype=np.int32)
    cdef int64_t v0, t, prefix, suffix, nv, a_idx, b_idx, ra, rb, ncount
    with nogil:
        for l in range(1, arena_len + 1):
            ncount = pw[l]
            for v0 in range(ncount):
                t = v0
                for q in range(l - 1, -1, -1):
                    buf[q] = <int32_t>(t % n)
                    t = t // n
                a_idx = offset[l] + v0
                for j in range(nrel):
                    L = lhs_len[j]
                    R = rhs_len[j]
                    nl = l - L + R
                    if nl > arena_len:
                        continue
                    for p in range(0, l - L + 1):
                        for q in range(L):
                            if buf[p + q] != lhs_d[j, q]:
                                break
                        else:
                            prefix = v0 // pw[l - p]
                            suffix = v0 % pw[l - p - L]
                            nv = (prefix * pw[R] + rhs_val[j]) * pw[l - p - L] + suffix
                            b_idx = offset[nl] + nv
                            ra = _find(parent, a_idx)
                            rb = _find(parent, b_idx)
                            if ra < rb:
                                parent[rb] = <int32_t>ra
                            elif rb < ra:
                                parent[ra] = <int32_t>rb
        for v0 in range(total):
            parent[v0] = <int32_t>_find(parent, v0)
    return parent_np


cdef int64_t _inv_mod(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def det_mod_p(matrix, int64_t p):
    """Determinant of a square integer matrix modulo a prime p < 2**31."""
    if p >= 2**31 or p < 2:
        raise ValueError("modulus must be a prime below 2**31")
    a_np = np.array(matrix, dtype=np.int64) % p
    cdef int64_t[:, ::1] a = np.ascontiguousarray(a_np)
    cdef Py_ssize_t m = a.shape[0]
    if a.shape[1] != m:
        raise ValueError("matrix must be square")
    cdef Py_ssize_t i, r, c, piv
    cdef int64_t det = 1, inv, f, tmp
    with nogil:
        for i in range(m):
            piv = -1
            for r in range(i, m):
                if a[r, i] != 0:
                    piv = r
                    break
            if piv < 0:
                det = 0
                break
            if piv != i:
                for c in range(i, m):
                    tmp = a[i, c]
                    a[i, c] = a[piv, c]
                    a[piv, c] = tmp
                det = (p - det) % p
            det = det * a[i, i] % p
            inv = _inv_mod(a[i, i], p)
            for r in range(i + 1, m):
                if a[r, i] == 0:
                    continue
                f = a[r, i] * inv % p
                for c in range(i, m):
                    a[r, c] = (a[r, c] - f * a[i, c]) % p
                    if a[r, c] < 0:
                        a[r, c] += p
    return int(det)
