# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sector kernels; same contracts as the numpy fallback."""
import numpy as np
cimport numpy as cnp
from libc.string cimport memset

cnp.import_array()

ctypedef double complex cplx


def sector_traces(L, alpha, beta):
    cdef cplx[:, :, :, :, ::1] Lv = np.ascontiguousarray(L, dtype=np.complex128)
    cdef Py_ssize_t[:, ::1] av = np.ascontiguousarray(alpha, dtype=np.intp)
    cdef Py_ssize_t[:, ::1] bv = np.ascontiguousarray(beta, dtype=np.intp)
    cdef Py_ssize_t N = Lv.shape[0], d = Lv.shape[3]
    cdef Py_ssize_t Da = av.shape[0], Db = bv.shape[0]
    out = np.zeros((Da, Db), np.complex128)
    cdef cplx[:, ::1] ov = out
    cdef cplx P[9]
    cdef cplx Q[9]
    cdef Py_ssize_t a, b, i, r, s, t
    cdef cplx acc
    if d > 3:
        raise ValueError("auxiliary dimension above 3 not supported by the compiled kernel")
    with nogil:
        for a in range(Da):
            for b in range(Db):
                for r in range(d):
                    for s in range(d):
                        P[r * d + s] = 1.0 if r == s else 0.0
                for i in range(N):
                    for r in range(d):
                        for s in range(d):
                            acc = 0
                            for t in range(d):
                                acc = acc + Lv[i, av[a, i], bv[b, i], r, t] * P[t * d + s]
                            Q[r * d + s] = acc
                    for r in range(d * d):
                        P[r] = Q[r]
                acc = 0
                for r in range(d):
                    acc = acc + P[r * d + r]
                ov[a, b] = acc
    return out


def laurent_chain(site_polys, q, alpha, beta):
    cdef cplx[:, :, :, ::1] sp = np.ascontiguousarray(site_polys, dtype=np.complex128)
    cdef Py_ssize_t[:, ::1] av = np.ascontiguousarray(alpha, dtype=np.intp)
    cdef Py_ssize_t[:, ::1] bv = np.ascontiguousarray(beta, dtype=np.intp)
    cdef Py_ssize_t N = sp.shape[0], Da = av.shape[0], Db = bv.shape[0]
    cdef Py_ssize_t K = 6 * N + 1
    # q**(c*k) for c in [-N, N], k in [-3, 3]
    cc = np.arange(-N, N + 1)[:, None] * np.arange(-3, 4)[None, :]
    qpow_np = np.ascontiguousarray(complex(q) ** cc.astype(np.complex128))
    cdef cplx[:, ::1] qpow = qpow_np
    out = np.zeros((Da, Db, K), np.complex128)
    cdef cplx[:, :, ::1] ov = out
    work_np = np.zeros((2, K), np.complex128)
    cdef cplx[:, ::1] work = work_np
    cdef Py_ssize_t a, b, i, k, m, ai, bi, cur, nxt, c_off, lo, hi
    cdef cplx coeff
    with nogil:
        for a in range(Da):
            for b in range(Db):
                for k in range(K):
                    work[0, k] = 0
                work[0, 3 * N] = 1.0
                cur = 0
                lo = 3 * N
                hi = 3 * N
                c_off = 0
                for i in range(N):
                    ai = av[a, i]
                    bi = bv[b, i]
                    nxt = 1 - cur
                    for k in range(K):
                        work[nxt, k] = 0
                    for m in range(7):
                        coeff = sp[i, bi, ai, m]
                        if coeff == 0:
                            continue
                        coeff = coeff * qpow[c_off + N, m]
                        for k in range(lo, hi + 1):
                            work[nxt, k + m - 3] = work[nxt, k + m - 3] + work[cur, k] * coeff
                    lo = lo - 3 if lo >= 3 else 0
                    hi = hi + 3 if hi + 3 < K else K - 1
                    cur = nxt
                    c_off = c_off + bi - ai
                for k in range(K):
                    ov[a, b, k] = work[cur, k]
    return out
