"""Hot-loop kernels: per-bin PSD synthesis and sliding-window edge statistics.

A compiled Cython implementation (`_fast`) is preferred; a NumPy fallback
(`_ref`) with identical signatures is selected when the extension is not
built or when WBSENSE_PURE_PYTHON is set. Both draw from the same
`numpy.random.Generator` interface, but the draw order differs, so the two
backends are statistically (not bitwise) equivalent; a fixed seed is
reproducible within one backend.
"""

import os

if os.environ.get("WBSENSE_PURE_PYTHON"):
    from . import _ref as _backend
else:
    try:
        from . import _fast as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _ref as _backend  # type: ignore[no-redef]

BACKEND = _backend.NAME
fill_psd = _backend.fill_psd
edge_accumulate = _backend.edge_accumulate

__all__ = ["BACKEND", "fill_psd", "edge_accumulate"]
