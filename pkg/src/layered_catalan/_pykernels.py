"""Pure-Python (numpy/scipy) versions of the compiled kernels.

Signatures and results match :mod:`layered_catalan._ckernels` exactly.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def arena_union_find(n: int, arena_len: int, lhs, rhs) -> np.ndarray:
    pw = [n ** k for k in range(arena_len + 2)]
    offset = [0]
    for k in range(arena_len + 1):
        offset.append(offset[-1] + pw[k])
    total = offset[arena_len + 1]
    if total > 2**31 - 1:
        raise MemoryError("arena too large for int32 labels")

    src: list[np.ndarray] = []
    dst: list[np.ndarray] = []
    for l in range(1, arena_len + 1):
        values = np.arange(pw[l], dtype=np.int64)
        digits = np.empty((pw[l], l), dtype=np.int64)
        t = values.copy()
        for q in range(l - 1, -1, -1):
            digits[:, q] = t % n
            t //= n
        for side_l, side_r in zip(lhs, rhs):
            L, R = len(side_l), len(side_r)
            nl = l - L + R
            if nl > arena_len or L > l:
                continue
            rval = 0
            for a in side_r:
                rval = rval * n + (a - 1)
            for p in range(0, l - L + 1):
                mask = np.ones(pw[l], dtype=bool)
                for q, a in enumerate(side_l):
                    mask &= digits[:, p + q] == a - 1
                v = values[mask]
                if v.size == 0:
                    continue
                prefix = v // pw[l - p]
                suffix = v % pw[l - p - L]
                nv = (prefix * pw[R] + rval) * pw[l - p - L] + suffix
                src.append(offset[l] + v)
                dst.append(offset[nl] + nv)
    if src:
        s = np.concatenate(src)
        d = np.concatenate(dst)
    else:
        s = d = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(s.size, dtype=np.int8), (s, d)), shape=(total, total))
    _, comp = connected_components(graph, directed=False)
    least = np.full(comp.max() + 1, total, dtype=np.int64)
    np.minimum.at(least, comp, np.arange(total, dtype=np.int64))
    return least[comp].astype(np.int32)


def det_mod_p(matrix, p: int) -> int:
    if p >= 2**31 or p < 2:
        raise ValueError("modulus must be a prime below 2**31")
    a = np.array(matrix, dtype=np.int64) % p
    m = a.shape[0]
    if a.ndim != 2 or a.shape[1] != m:
        raise ValueError("matrix must be square")
    det = 1
    for i in range(m):
        nz = np.nonzero(a[i:, i])[0]
        if nz.size == 0:
            return 0
        piv = i + int(nz[0])
        if piv != i:
            a[[i, piv]] = a[[piv, i]]
            det = -det
        pivot = int(a[i, i])
        det = det * pivot % p
        inv = pow(pivot, -1, p)
        rows = i + 1 + np.nonzero(a[i + 1:, i])[0]
        if rows.size:
            f = a[rows, i] * inv % p
            a[rows, i:] = (a[rows, i:] - (f[:, None] * a[i, i:][None, :]) % p) % p
    return det % p
