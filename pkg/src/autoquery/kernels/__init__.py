"""Numeric scoring kernels with an optional compiled fast path.

Three hot loops dominate large runs: retrieval scoring of a query
against every indexed sentence, one-vs-all cosine over the weighted
co-occurrence matrix, and one-vs-all intersection counts over sentence
incidence lists.  Both backends implement the same functions over the
same CSR-style array encodings and produce identical values; the
compiled Cython module is preferred when importable.

Set AUTOQUERY_KERNELS=python to force the pure-Python backend.
"""

import os

from . import _pykernels

_impl = _pykernels
_backend = "python"

if os.environ.get("AUTOQUERY_KERNELS", "").lower() not in ("python", "py", "pure"):
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        _impl = _ckernels
        _backend = "compiled"
    except ImportError:
        pass


def backend() -> str:
    """Name of the active backend: "compiled" or "python"."""
    return _backend


score_overlap = _impl.score_overlap
cosine_one_vs_all = _impl.cosine_one_vs_all
intersect_one_vs_all = _impl.intersect_one_vs_all
