"""Hot evaluation kernels with backend selection at import time.

Prefers the compiled Cython extension; falls back to the vectorized numpy
implementation when the extension is unavailable or when the environment
variable ``COORDSEARCH_PURE_PYTHON`` is set (useful for benchmarking the
two backends against each other).
"""

import os

if os.environ.get("COORDSEARCH_PURE_PYTHON"):
    from . import _numpy_impl as _impl
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _numpy_impl as _impl

BACKEND = _impl.BACKEND

bin_loads = _impl.bin_loads
gsoft_total = _impl.gsoft_total
binpack_wlu_all = _impl.binpack_wlu_all
binpack_au_all = _impl.binpack_au_all
formats_g = _impl.formats_g
formats_private_all = _impl.formats_private_all

__all__ = [
    "BACKEND",
    "bin_loads",
    "gsoft_total",
    "binpack_wlu_all",
    "binpack_au_all",
    "formats_g",
    "formats_private_all",
]
