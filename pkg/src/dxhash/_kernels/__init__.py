"""Bulk kernels with a compiled fast path.

The Cython extension is picked when importable; setting DXHASH_PURE=1 in the
environment forces the pure numpy implementation. Both expose the same
functions and produce bit-identical results (see tests/test_kernels.py), so
the choice only affects speed.
"""

from __future__ import annotations

import os

from . import _python

if os.environ.get("DXHASH_PURE") == "1":
    _impl = _python
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _python

IMPL_NAME: str = _impl.IMPL

mix64_vec = _impl.mix64_vec
gate64_vec = _impl.gate64_vec
digest8_vec = _impl.digest8_vec
digest16_vec = _impl.digest16_vec
lookup_bulk = _impl.lookup_bulk
lookup_weighted_bulk = _impl.lookup_weighted_bulk
maglev_fill = _impl.maglev_fill
jump_bulk = _impl.jump_bulk
