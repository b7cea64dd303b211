"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GITKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
diag_rhs = _pykernels.diag_rhs
diag_jac = _pykernels.diag_jac
diag_observe = _pykernels.diag_observe

if os.environ.get("GITKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        diag_rhs = _ckernels.diag_rhs
        diag_jac = _ckernels.diag_jac
        diag_observe = _ckernels.diag_observe
