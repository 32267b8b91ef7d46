"""Timing comparison of the two scoring-kernel backends.

Runs the three hot kernels at a few synthetic sizes, checks that the
compiled and pure-Python implementations return identical arrays, and
prints best-of-N wall times with the speedup ratio.

Usage: python3 benchmarks/bench_kernels.py [--repeats N] [--seed S]
"""

import argparse
import random
import time

import numpy as np

from autoquery.kernels import _pykernels

try:
    from autoquery.kernels import _ckernels
except ImportError:
    _ckernels = None


def make_csr(rng, n_rows, vocab, avg_len, weighted):
    """Random CSR matrix with sorted ids per row."""
    indptr = [0]
    ids = []
    for _ in range(n_rows):
        k = min(vocab, max(1, int(rng.gauss(avg_len, avg_len / 4))))
        ids.extend(sorted(rng.sample(range(vocab), k)))
        indptr.append(len(ids))
    indptr = np.asarray(indptr, dtype=np.int64)
    ids = np.asarray(ids, dtype=np.int32)
    if not weighted:
        return indptr, ids, None, None
    data = np.asarray([rng.random() + 0.05 for _ in range(len(ids))], dtype=np.float64)
    norms = np.sqrt(np.add.reduceat(data * data, indptr[:-1])) if len(ids) else np.zeros(0)
    norms = np.asarray(norms, dtype=np.float64)
    return indptr, ids, data, norms


def best_of(fn, args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng, n_rows, vocab, avg_len):
    indptr, ids, data, norms = make_csr(rng, n_rows, vocab, avg_len, weighted=True)
    row = rng.randrange(n_rows)
    q = np.asarray(sorted(rng.sample(range(vocab), min(vocab, 8))), dtype=np.int32)
    return [
        ("score_overlap", (q, indptr, ids, len(q) + 2)),
        ("cosine_one_vs_all", (indptr, ids, data, norms, row)),
        ("intersect_one_vs_all", (indptr, ids, row)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled backend not importable; nothing to compare")
        return 1
    rng = random.Random(args.seed)
    sizes = ((500, 2_000, 12), (5_000, 20_000, 25), (20_000, 50_000, 40))
    header = f"{'kernel':<22}{'rows':>8}{'python ms':>12}{'compiled ms':>13}{'speedup':>9}  match"
    print(header)
    print("-" * len(header))
    for n_rows, vocab, avg_len in sizes:
        for name, call_args in cases(rng, n_rows, vocab, avg_len):
            t_py, out_py = best_of(getattr(_pykernels, name), call_args, args.repeats)
            t_c, out_c = best_of(getattr(_ckernels, name), call_args, args.repeats)
            match = np.array_equal(out_py, out_c)
            print(
                f"{name:<22}{n_rows:>8}{t_py * 1e3:>12.3f}{t_c * 1e3:>13.3f}"
                f"{t_py / t_c:>9.1f}  {'yes' if match else 'NO'}"
            )
            if not match:
                return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
