# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _numpy_impl: tight loops over the same kernel surface."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline double _soft_term(double x, double capacity) noexcept:
    cdef double half = capacity / 2.0
    cdef double d = x - half
    if x <= capacity:
        return half * half - d * d
    return d * d


def bin_loads(cnp.int64_t[:] assign, cnp.float64_t[:] sizes, int n_bins):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] loads = np.zeros(n_bins, dtype=np.float64)
    cdef double[:] lv = loads
    cdef Py_ssize_t i
    for i in range(assign.shape[0]):
        lv[assign[i]] += sizes[i]
    return loads


def gsoft_total(cnp.float64_t[:] loads, double capacity):
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(loads.shape[0]):
        total += _soft_term(loads[i], capacity)
    return total


def binpack_wlu_all(cnp.int64_t[:] assign, cnp.float64_t[:] sizes,
                    cnp.float64_t[:] loads, double capacity):
    cdef Py_ssize_t n = assign.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[:] ov = out
    cdef Py_ssize_t i
    cdef double x
    for i in range(n):
        x = loads[assign[i]]
        ov[i] = _soft_term(x, capacity) - _soft_term(x - sizes[i], capacity)
    return out


def binpack_au_all(cnp.int64_t[:] assign, cnp.float64_t[:] sizes,
                   cnp.float64_t[:] loads, double capacity):
    cdef Py_ssize_t n = assign.shape[0]
    cdef Py_ssize_t n_bins = loads.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[:] ov = out
    cdef double g = 0.0
    cdef double spread, mf, x
    cdef Py_ssize_t i, b
    for b in range(n_bins):
        g += _soft_term(loads[b], capacity)
    for i in range(n):
        spread = sizes[i] / n_bins
        mf = 0.0
        for b in range(n_bins):
            x = loads[b] + spread
            if b == assign[i]:
                x -= sizes[i]
            mf += _soft_term(x, capacity)
        ov[i] = g - mf
    return out


def formats_g(cnp.float64_t[:, :] usage, cnp.float64_t[:, :] prefs,
              cnp.int64_t[:] indptr, cnp.int64_t[:] indices):
    cdef Py_ssize_t m = usage.shape[0]
    cdef Py_ssize_t nf = usage.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] theta = np.zeros(nf, dtype=np.float64)
    cdef double[:] tv = theta
    cdef double total = 0.0
    cdef double s
    cdef Py_ssize_t a, i, k
    for a in range(m):
        for i in range(nf):
            tv[i] += usage[a, i]
    for a in range(m):
        for i in range(nf):
            s = 0.0
            for k in range(indptr[a], indptr[a + 1]):
                s += usage[indices[k], i]
            total += tv[i] * prefs[a, i] * usage[a, i] * s
    return total


def formats_private_all(cnp.float64_t[:, :] usage, cnp.float64_t[:, :] prefs,
                        cnp.int64_t[:] indptr, cnp.int64_t[:] indices,
                        cnp.float64_t[:] clamp_row):
    cdef Py_ssize_t m = usage.shape[0]
    cdef Py_ssize_t nf = usage.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] s_arr = np.zeros((m, nf), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nw_arr = np.zeros((m, nf), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double[:, :] s = s_arr
    cdef double[:, :] nw = nw_arr
    cdef double[:] ov = out
    cdef double theta[64]
    cdef double t[64]
    cdef double g, g_cl, w, w_cl, delta, t_cl, th_cl
    cdef Py_ssize_t a, b, i, k
    if nf > 64:
        raise ValueError("format count exceeds kernel limit (64)")
    for i in range(nf):
        theta[i] = 0.0
        t[i] = 0.0
    for a in range(m):
        for i in range(nf):
            theta[i] += usage[a, i]
            for k in range(indptr[a], indptr[a + 1]):
                b = indices[k]
                s[a, i] += usage[b, i]
                nw[a, i] += prefs[b, i] * usage[b, i]
    g = 0.0
    for a in range(m):
        for i in range(nf):
            t[i] += prefs[a, i] * usage[a, i] * s[a, i]
    for i in range(nf):
        g += t[i] * theta[i]
    for a in range(m):
        g_cl = 0.0
        for i in range(nf):
            w = prefs[a, i] * usage[a, i]
            w_cl = prefs[a, i] * clamp_row[i]
            delta = clamp_row[i] - usage[a, i]
            t_cl = t[i] + (w_cl - w) * s[a, i] + delta * nw[a, i]
            th_cl = theta[i] + delta
            g_cl += t_cl * th_cl
        ov[a] = g - g_cl
    return out
