"""Pure-Python backend for the scoring kernels.

Array encodings shared with the compiled backend:

- a token/lemma id array is int32, sorted ascending, duplicate-free
- a collection of rows is CSR-style: ``indptr`` (int64, length n+1)
  delimits slices of a flat ``ids``/``indices`` array, each slice
  sorted ascending
- weighted rows add a float64 ``data`` array parallel to ``indices``

All functions return numpy arrays so callers never see which backend
ran.  Dot products accumulate in row-merge order; the compiled backend
does the same, which keeps results bit-identical between the two.
"""

import numpy as np


def score_overlap(query_ids, indptr, ids, query_size):
    """Overlap score of one query against every row.

    Row i scores ``|Q cap S_i| / sqrt(query_size * |S_i|)``; empty rows
    or an empty query score 0.  ``query_size`` may exceed
    ``len(query_ids)`` when some query terms are absent from the
    indexed vocabulary (they still count in the denominator).
    """
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.float64)
    if query_size <= 0 or len(query_ids) == 0 or len(ids) == 0:
        return out
    hit = np.isin(ids, query_ids)
    csum = np.zeros(len(ids) + 1, dtype=np.int64)
    np.cumsum(hit, out=csum[1:])
    counts = csum[indptr[1:]] - csum[indptr[:-1]]
    lens = indptr[1:] - indptr[:-1]
    nz = counts > 0
    # integer counts plus one rounded sqrt and divide: matches the
    # compiled backend bit for bit
    out[nz] = counts[nz] / np.sqrt((query_size * lens[nz]).astype(np.float64))
    return out


def cosine_one_vs_all(indptr, indices, data, norms, row):
    """Cosine of sparse row ``row`` against every row (self included).

    Rows with zero norm score 0 against everything.
    """
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.float64)
    rlo = int(indptr[row])
    rhi = int(indptr[row + 1])
    nr = float(norms[row])
    if nr == 0.0:
        return out
    for j in range(n):
        nj = float(norms[j])
        if nj == 0.0:
            continue
        a = rlo
        b = int(indptr[j])
        bhi = int(indptr[j + 1])
        dot = 0.0
        while a < rhi and b < bhi:
            ia = int(indices[a])
            ib = int(indices[b])
            if ia == ib:
                dot += float(data[a]) * float(data[b])
                a += 1
                b += 1
            elif ia < ib:
                a += 1
            else:
                b += 1
        out[j] = dot / (nr * nj)
    return out


def intersect_one_vs_all(indptr, indices, row):
    """Intersection size of row ``row`` with every row (self included)."""
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.int64)
    rlo = int(indptr[row])
    rhi = int(indptr[row + 1])
    for j in range(n):
        a = rlo
        b = int(indptr[j])
        bhi = int(indptr[j + 1])
        c = 0
        while a < rhi and b < bhi:
            ia = int(indices[a])
            ib = int(indices[b])
            if ia == ib:
                c += 1
                a += 1
                b += 1
            elif ia < ib:
                a += 1
            else:
                b += 1
        out[j] = c
    return out
