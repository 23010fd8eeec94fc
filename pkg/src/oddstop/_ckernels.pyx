# cython: language_level=3
"""Compiled kernels. Must match ``_pykernels`` operation for operation."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def backward_induction(const double[::1] p, const double[::1] R):
    cdef Py_ssize_t n = p.shape[0], i
    cdef double wi = 0.0, stop
    w = np.empty(n + 1)
    cdef double[::1] wv = w
    wv[n] = 0.0
    for i in range(n - 1, -1, -1):
        stop = (1.0 - p[i]) * wi + p[i] * R[i]
        if stop > wi:
            wi = stop
        wv[i] = wi
    return w


def deterministic_values(const double[::1] p, const double[::1] R):
    cdef Py_ssize_t n = p.shape[0], i
    cdef long long total = 1LL << n, mask
    cdef double z, val, pii
    out = np.empty(total)
    cdef double[::1] ov = out
    with nogil:
        for mask in range(total):
            z = 1.0
            val = 0.0
            for i in range(n):
                pii = 1.0 - <double>((mask >> (n - 1 - i)) & 1)
                val = val + R[i] * (z * p[i] * (1.0 - pii))
                z = z * ((1.0 - p[i]) + p[i] * pii)
            ov[mask] = val
    return out


def simulate_chunk(const double[::1] p, const double[::1] pi, const double[::1] R,
                   const double[:, ::1] u, const double[:, ::1] v):
    cdef Py_ssize_t trials = u.shape[0], n = p.shape[0], t, i
    cdef double reward
    out = np.empty(trials)
    cdef double[::1] ov = out
    with nogil:
        for t in range(trials):
            reward = 0.0
            for i in range(n):
                if u[t, i] < p[i] and v[t, i] >= pi[i]:
                    reward = R[i]
                    break
            ov[t] = reward
    return out
