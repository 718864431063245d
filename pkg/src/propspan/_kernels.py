"""Select the compiled kernels when available, else the pure-Python ones.

Set ``PROPSPAN_PURE=1`` to force the fallback.
"""

import os

from . import _pure

if os.environ.get("PROPSPAN_PURE"):
    _impl = _pure
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _pure

HAVE_EXTENSION = _impl is not _pure
BACKEND = "cython" if HAVE_EXTENSION else "python"

trigram_buckets = _impl.trigram_buckets
credit_sums = _impl.credit_sums
