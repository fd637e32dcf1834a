"""Backend selection for the modular elimination kernel.

The compiled extension is used when it imported successfully and the modulus
fits in 62 bits; otherwise the pure-Python implementation runs.  Setting the
environment variable ``CKPERIODS_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if not os.environ.get("CKPERIODS_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
COMPILED_MODULUS_LIMIT = 2**62


def eliminate_mod(rows, ncols, p, M):
    if _compiled is not None and p**M < COMPILED_MODULUS_LIMIT:
        return _compiled.eliminate_mod(rows, ncols, p, M)
    return _pykernels.eliminate_mod(rows, ncols, p, M)


def eliminate_mod_python(rows, ncols, p, M):
    return _pykernels.eliminate_mod(rows, ncols, p, M)


def eliminate_mod_compiled(rows, ncols, p, M):
    if _compiled is None:
        raise RuntimeError("compiled kernel is not available")
    return _compiled.eliminate_mod(rows, ncols, p, M)
