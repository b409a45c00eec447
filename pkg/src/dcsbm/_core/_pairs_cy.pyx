# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython implementation of the counter-based pair sampler.

Must stay bit-compatible with ``_pairs_np``: same hash stream, same
left-to-right rounding order for the probability product (the build turns
FMA contraction off).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GOLD = 0x9E3779B97F4A7C15ULL
cdef u64 ROW = 0xD1342543DE82EF95ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL
cdef double INV53 = 2.0 ** -53


cdef inline u64 _mix(u64 z) nogil:
    z ^= z >> 30
    z *= MIX1
    z ^= z >> 27
    z *= MIX2
    z ^= z >> 31
    return z


def sample_edges(object seed_obj, double[::1] weights, long[::1] labels,
                 double[:, ::1] block, double inv_ndbar):
    """See ``_pairs_np.sample_edges``; identical contract and output."""
    cdef u64 seed = <u64> (int(seed_obj) & ((1 << 64) - 1))
    cdef u64 seed_h = _mix(seed ^ GOLD)
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t cap = 1024 if n < 1024 else n
    us = np.empty(cap, dtype=np.int64)
    vs = np.empty(cap, dtype=np.int64)
    cdef long[::1] us_v = us
    cdef long[::1] vs_v = vs
    cdef Py_ssize_t m = 0
    cdef Py_ssize_t u, v
    cdef long su
    cdef u64 base, h
    cdef double wu, p, r
    for u in range(n - 1):
        su = labels[u]
        wu = weights[u]
        base = _mix(seed_h + (<u64> u) * ROW)
        for v in range(u + 1, n):
            p = ((wu * weights[v]) * block[su, labels[v]]) * inv_ndbar
            if p <= 0.0:
                continue
            h = _mix(base ^ ((<u64> v) * GOLD))
            r = <double> (h >> 11) * INV53
            if r < p:
                if m == cap:
                    cap *= 2
                    us = np.resize(us, cap)
                    vs = np.resize(vs, cap)
                    us_v = us
                    vs_v = vs
                us_v[m] = u
                vs_v[m] = v
                m += 1
    return us[:m].copy(), vs[:m].copy()
