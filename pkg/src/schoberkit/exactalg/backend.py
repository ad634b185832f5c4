"""Selects the row-reduction kernel at import time.

The compiled GMP kernel is used when the extension is built; otherwise the
pure-Python kernel takes over. Setting SCHOBERKIT_PURE=1 forces the fallback.
"""

from __future__ import annotations

import os

from . import _pyelim

BACKEND = "python"
rref = _pyelim.rref

if os.environ.get("SCHOBERKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _elim  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        rref = _elim.rref
        BACKEND = "compiled"

python_rref = _pyelim.rref


def compiled_rref():
    """Return the compiled kernel, or None when the extension is unavailable."""
    try:
        from . import _elim  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _elim.rref
