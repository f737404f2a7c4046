"""Pick the compiled kernels when importable, the numpy ones otherwise."""

import os

from . import _fallback

if os.environ.get("PEEREVAL_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    ratio_sums = _compiled.ratio_sums
else:
    BACKEND = "python"
    ratio_sums = _fallback.ratio_sums

KERNELS = {"python": _fallback.ratio_sums}
if _compiled is not None:
    KERNELS["cython"] = _compiled.ratio_sums
