# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Numerov propagation and node counting.

Mirrors :mod:`kgyukawa._numerov_py` exactly; see that module for the
recurrence and rescaling conventions.
"""
import numpy as np

from libc.math cimport fabs

cdef double _BIG = 1e150


def numerov_propagate(const double[:] f, double h, double u0, double u1):
    cdef Py_ssize_t m = f.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] u = out
    cdef double c = h * h / 12.0
    cdef double w_prev, w_cur, w_next
    cdef Py_ssize_t i, j
    if m == 0:
        return out
    u[0] = u0
    if m == 1:
        return out
    u[1] = u1
    with nogil:
        w_prev = 1.0 - c * f[0]
        w_cur = 1.0 - c * f[1]
        for i in range(1, m - 1):
            w_next = 1.0 - c * f[i + 1]
            u[i + 1] = ((12.0 - 10.0 * w_cur) * u[i] - w_prev * u[i - 1]) / w_next
            if fabs(u[i + 1]) > _BIG:
                for j in range(i + 2):
                    u[j] /= _BIG
            w_prev = w_cur
            w_cur = w_next
    return out


def count_sign_changes(const double[:] u):
    cdef Py_ssize_t i, m = u.shape[0]
    cdef int last = 0, s, count = 0
    with nogil:
        for i in range(m):
            if u[i] > 0.0:
                s = 1
            elif u[i] < 0.0:
                s = -1
            else:
                continue
            if last != 0 and s != last:
                count += 1
            last = s
    return count
