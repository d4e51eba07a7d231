"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-Python kernels are used.  Both implement identical contracts and
produce bit-identical results.  Set ``CUCKOOPEEL_BACKEND=pure`` or
``=compiled`` to force a choice (``compiled`` raises if the extension is
missing).
"""
from __future__ import annotations

import os

from . import _core_py

_requested = os.environ.get("CUCKOOPEEL_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "pure", "compiled"):
    raise RuntimeError(
        "CUCKOOPEEL_BACKEND must be 'auto', 'pure' or 'compiled', "
        f"got {_requested!r}"
    )

if _requested == "pure":
    kernels = _core_py
else:
    try:
        from . import _core_c as kernels  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
        kernels = _core_py


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'pure'."""
    return "pure" if kernels is _core_py else "compiled"
