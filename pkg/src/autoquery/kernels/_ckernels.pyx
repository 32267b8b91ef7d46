# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the scoring kernels.

Mirrors _pykernels function for function; see that module for the
array encodings.  Dot products accumulate in row-merge order so both
backends return bit-identical floats.
"""

from libc.math cimport sqrt

import numpy as np


def score_overlap(int[::1] query_ids, long long[::1] indptr, int[::1] ids,
                  long long query_size):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t nq = query_ids.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    if query_size <= 0 or nq == 0:
        return out_arr
    cdef Py_ssize_t i, a, b, hi
    cdef long long c, row_len
    for i in range(n):
        b = indptr[i]
        hi = indptr[i + 1]
        row_len = hi - b
        if row_len == 0:
            continue
        a = 0
        c = 0
        while a < nq and b < hi:
            if query_ids[a] == ids[b]:
                c += 1
                a += 1
                b += 1
            elif query_ids[a] < ids[b]:
                a += 1
            else:
                b += 1
        if c:
            out[i] = c / sqrt(<double>(query_size * row_len))
    return out_arr


def cosine_one_vs_all(long long[::1] indptr, int[::1] indices,
                      double[::1] data, double[::1] norms, Py_ssize_t row):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t rlo = indptr[row]
    cdef Py_ssize_t rhi = indptr[row + 1]
    cdef double nr = norms[row]
    if nr == 0.0:
        return out_arr
    cdef Py_ssize_t j, a, b, bhi
    cdef double dot, nj
    cdef int ia, ib
    for j in range(n):
        nj = norms[j]
        if nj == 0.0:
            continue
        a = rlo
        b = indptr[j]
        bhi = indptr[j + 1]
        dot = 0.0
        while a < rhi and b < bhi:
            ia = indices[a]
            ib = indices[b]
            if ia == ib:
                dot += data[a] * data[b]
                a += 1
                b += 1
            elif ia < ib:
                a += 1
            else:
                b += 1
        out[j] = dot / (nr * nj)
    return out_arr


def intersect_one_vs_all(long long[::1] indptr, int[::1] indices,
                         Py_ssize_t row):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t rlo = indptr[row]
    cdef Py_ssize_t rhi = indptr[row + 1]
    cdef Py_ssize_t j, a, b, bhi
    cdef long long c
    cdef int ia, ib
    for j in range(n):
        a = rlo
        b = indptr[j]
        bhi = indptr[j + 1]
        c = 0
        while a < rhi and b < bhi:
            ia = indices[a]
            ib = indices[b]
            if ia == ib:
                c += 1
                a += 1
                b += 1
            elif ia < ib:
                a += 1
            else:
                b += 1
        out[j] = c
    return out_arr
