"""Scoring kernel tests: a naive oracle per kernel, plus bit-identical
agreement between the pure-Python backend and whichever backend the
package selected at import."""

import math
import random

import numpy as np

from autoquery import kernels
from autoquery.kernels import _pykernels


def random_rows(rng, n_rows, vocab, max_len):
    rows = []
    for _ in range(n_rows):
        size = rng.randrange(0, max_len + 1)
        rows.append(sorted(rng.sample(range(vocab), min(size, vocab))))
    return rows


def to_csr(rows):
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    flat = []
    for i, row in enumerate(rows):
        flat.extend(row)
        indptr[i + 1] = len(flat)
    return indptr, np.array(flat, dtype=np.int32)


def weighted_csr(rng, rows):
    indptr, indices = to_csr(rows)
    data = np.array([rng.uniform(-2, 3) for _ in range(len(indices))], dtype=np.float64)
    norms = np.zeros(len(rows), dtype=np.float64)
    for i in range(len(rows)):
        seg = data[indptr[i] : indptr[i + 1]]
        norms[i] = math.sqrt(float(np.dot(seg, seg)))
    return indptr, indices, data, norms


def oracle_overlap(query, rows, query_size):
    out = []
    qset = set(query)
    for row in rows:
        c = len(qset & set(row))
        if c == 0 or query_size <= 0 or not row:
            out.append(0.0)
        else:
            out.append(c / math.sqrt(query_size * len(row)))
    return out


def oracle_cosine(rows_w, row):
    base = dict(rows_w[row])
    bnorm = math.sqrt(sum(v * v for v in base.values()))
    out = []
    for other in rows_w:
        d = dict(other)
        onorm = math.sqrt(sum(v * v for v in d.values()))
        if bnorm == 0.0 or onorm == 0.0:
            out.append(0.0)
            continue
        dot = sum(v * d[k] for k, v in base.items() if k in d)
        out.append(dot / (bnorm * onorm))
    return out


class TestScoreOverlap:
    def test_known_values(self):
        # rows: {1,2,3}, {4}, {} against query {2,3,4}, 3 oov-free terms
        indptr, ids = to_csr([[1, 2, 3], [4], []])
        q = np.array([2, 3, 4], dtype=np.int32)
        got = kernels.score_overlap(q, indptr, ids, 3)
        assert abs(got[0] - 2 / math.sqrt(9)) < 1e-15
        assert abs(got[1] - 1 / math.sqrt(3)) < 1e-15
        assert got[2] == 0.0

    def test_query_size_counts_missing_terms(self):
        # 2 of 5 query terms exist anywhere; denominator still uses 5
        indptr, ids = to_csr([[7, 9]])
        q = np.array([7, 9], dtype=np.int32)
        got = kernels.score_overlap(q, indptr, ids, 5)
        assert abs(got[0] - 2 / math.sqrt(10)) < 1e-15

    def test_empty_query(self):
        indptr, ids = to_csr([[1, 2]])
        got = kernels.score_overlap(np.array([], dtype=np.int32), indptr, ids, 0)
        assert got.tolist() == [0.0]

    def test_oracle_fuzz(self):
        rng = random.Random(20240817)
        for _ in range(300):
            rows = random_rows(rng, rng.randrange(1, 12), 30, 10)
            qlen = rng.randrange(0, 8)
            q = sorted(rng.sample(range(30), qlen))
            extra = rng.randrange(0, 3)  # pretend some terms were oov
            indptr, ids = to_csr(rows)
            got = kernels.score_overlap(
                np.array(q, dtype=np.int32), indptr, ids, qlen + extra
            )
            want = oracle_overlap(q, rows, qlen + extra)
            assert np.allclose(got, want, atol=1e-12)
            assert (got >= 0).all() and (got <= 1).all()


class TestCosineOneVsAll:
    def test_oracle_fuzz(self):
        rng = random.Random(99)
        for _ in range(200):
            rows = random_rows(rng, rng.randrange(1, 10), 20, 8)
            indptr, indices, data, norms = weighted_csr(rng, rows)
            rows_w = [
                list(zip(indices[indptr[i] : indptr[i + 1]].tolist(),
                         data[indptr[i] : indptr[i + 1]].tolist()))
                for i in range(len(rows))
            ]
            row = rng.randrange(len(rows))
            got = kernels.cosine_one_vs_all(indptr, indices, data, norms, row)
            want = oracle_cosine(rows_w, row)
            assert np.allclose(got, want, atol=1e-9)

    def test_zero_norm_row(self):
        indptr, indices = to_csr([[], [0, 1]])
        data = np.array([1.0, 1.0], dtype=np.float64)
        norms = np.array([0.0, math.sqrt(2.0)], dtype=np.float64)
        got = kernels.cosine_one_vs_all(indptr, indices, data, norms, 0)
        assert got.tolist() == [0.0, 0.0]


class TestIntersectOneVsAll:
    def test_counts(self):
        rows = [[1, 2, 3], [2, 3, 9], [], [1]]
        indptr, indices = to_csr(rows)
        got = kernels.intersect_one_vs_all(indptr, indices, 0)
        assert got.tolist() == [3, 2, 0, 1]

    def test_oracle_fuzz(self):
        rng = random.Random(7)
        for _ in range(200):
            rows = random_rows(rng, rng.randrange(1, 10), 25, 9)
            indptr, indices = to_csr(rows)
            row = rng.randrange(len(rows))
            got = kernels.intersect_one_vs_all(indptr, indices, row)
            want = [len(set(rows[row]) & set(r)) for r in rows]
            assert got.tolist() == want


class TestBackendParity:
    """The selected backend and the pure-Python one must agree bit for
    bit, so artifacts never depend on which one was importable."""

    def test_backend_reported(self):
        assert kernels.backend() in ("compiled", "python")

    def test_overlap_parity(self):
        rng = random.Random(5150)
        for _ in range(150):
            rows = random_rows(rng, rng.randrange(1, 15), 40, 12)
            q = sorted(rng.sample(range(40), rng.randrange(0, 10)))
            indptr, ids = to_csr(rows)
            qa = np.array(q, dtype=np.int32)
            size = len(q) + rng.randrange(0, 4)
            a = kernels.score_overlap(qa, indptr, ids, size)
            b = _pykernels.score_overlap(qa, indptr, ids, size)
            assert a.tolist() == b.tolist()

    def test_cosine_parity(self):
        rng = random.Random(6)
        for _ in range(150):
            rows = random_rows(rng, rng.randrange(1, 12), 25, 10)
            indptr, indices, data, norms = weighted_csr(rng, rows)
            row = rng.randrange(len(rows))
            a = kernels.cosine_one_vs_all(indptr, indices, data, norms, row)
            b = _pykernels.cosine_one_vs_all(indptr, indices, data, norms, row)
            assert a.tolist() == b.tolist()

    def test_intersect_parity(self):
        rng = random.Random(77)
        for _ in range(150):
            rows = random_rows(rng, rng.randrange(1, 12), 25, 10)
            indptr, indices = to_csr(rows)
            row = rng.randrange(len(rows))
            a = kernels.intersect_one_vs_all(indptr, indices, row)
            b = _pykernels.intersect_one_vs_all(indptr, indices, row)
            assert a.tolist() == b.tolist()
