"""Kernel selection: compiled extension with a pure-Python fallback.

The compiled and pure GIG kernels execute identical arithmetic against
the same BitGenerator stream, so results are bit-identical either way.
The compiled one is picked automatically when its extension module
imported cleanly; set MBSP_PURE_KERNELS=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _gig_pure

try:
    from . import _gig_compiled
except ImportError:  # extension not built on this install
    _gig_compiled = None

_FORCE_PURE = os.environ.get("MBSP_PURE_KERNELS", "").strip().lower() in {"1", "true", "yes"}

USING_COMPILED = _gig_compiled is not None and not _FORCE_PURE

gig_vector = _gig_compiled.gig_vector if USING_COMPILED else _gig_pure.gig_vector

# both paths stay importable so tests and benchmarks can compare them
gig_vector_pure = _gig_pure.gig_vector
gig_vector_compiled = _gig_compiled.gig_vector if _gig_compiled is not None else None


def active_kernel_name():
    """Name of the kernel implementation selected at import time."""
    return "compiled" if USING_COMPILED else "pure"
