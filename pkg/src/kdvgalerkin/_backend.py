"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy fallback is
always available.  ``KDVGALERKIN_BACKEND`` overrides the choice:
``auto`` (default), ``compiled`` (error if missing), or ``python``.
"""

from __future__ import annotations

import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_requested = os.environ.get("KDVGALERKIN_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "compiled", "python"):
    raise ImportError(
        f"KDVGALERKIN_BACKEND={_requested!r} not recognized (use auto, compiled, or python)"
    )
if _requested == "compiled" and _compiled is None:
    raise ImportError(
        "KDVGALERKIN_BACKEND=compiled but the extension is not built; "
        "run `python setup.py build_ext --inplace`"
    )

_active = _fallback if (_requested == "python" or _compiled is None) else _compiled

BACKEND_NAME: str = _active.BACKEND_NAME
HAVE_COMPILED: bool = _compiled is not None

product_truncated = _active.product_truncated
power_truncated = _active.power_truncated
stage_solve = _active.stage_solve
