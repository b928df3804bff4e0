# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tensor tanh-sinh sum over the unit cube."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def cube_sums(double[:, :, ::1] num, double[:, :, ::1] den,
              double[::1] off, signed char[::1] side, double[::1] wt,
              int[::1] lev, int nlev):
    """Weighted integrand sums bucketed by the coarsest level containing each node.

    Returns (sums[nlev], mismatches, evaluations).
    """
    cdef Py_ssize_t n = off.shape[0]
    cdef Py_ssize_t nn = num.shape[0], nd = den.shape[0]
    cdef Py_ssize_t i, j, k, f, corner
    cdef double su, sv, sw, wu, wuv, a0, b0, pn, pd, val, x
    cdef int lu, luv, lk, mism = 0
    cdef long evals = 0
    cdef double[:, ::1] na = np.empty((2, max(nn, 1)))
    cdef double[:, ::1] nb = np.empty((2, max(nn, 1)))
    cdef double[:, ::1] da = np.empty((2, max(nd, 1)))
    cdef double[:, ::1] db = np.empty((2, max(nd, 1)))
    cdef double[::1] sums = np.zeros(nlev)
    cdef double[::1] comp = np.zeros(nlev)
    cdef double* c

    with nogil:
        for i in range(n):
            su = off[i]
            wu = wt[i]
            lu = lev[i]
            for j in range(n):
                sv = off[j]
                wuv = wu * wt[j]
                luv = lu if lu > lev[j] else lev[j]
                for k in range(2):
                    corner = side[i] | (side[j] << 1) | (k << 2)
                    for f in range(nn):
                        c = &num[f, corner, 0]
                        na[k, f] = c[0] + c[1] * su + c[2] * sv + c[3] * su * sv
                        nb[k, f] = c[4] + c[5] * su + c[6] * sv + c[7] * su * sv
                    for f in range(nd):
                        c = &den[f, corner, 0]
                        da[k, f] = c[0] + c[1] * su + c[2] * sv + c[3] * su * sv
                        db[k, f] = c[4] + c[5] * su + c[6] * sv + c[7] * su * sv
                for k in range(n):
                    sw = off[k]
                    lk = luv if luv > lev[k] else lev[k]
                    corner = side[k]
                    pn = 1.0
                    for f in range(nn):
                        pn *= na[corner, f] + nb[corner, f] * sw
                    pd = 1.0
                    for f in range(nd):
                        x = da[corner, f] + db[corner, f] * sw
                        if x <= 0.0:
                            mism += 1
                            x = -x
                        pd *= x
                    evals += 1
                    if pd > 0.0:
                        val = wuv * wt[k] * pn / sqrt(pd)
                        _neumaier(&sums[lk], &comp[lk], val)
    out = np.empty(nlev)
    for k in range(nlev):
        out[k] = sums[k] + comp[k]
    return out, mism, evals
