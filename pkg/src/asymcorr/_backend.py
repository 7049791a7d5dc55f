"""Backend selection for the per-sample filter loop.

Prefers the compiled extension; falls back to the pure-Python mirror when
the extension is unavailable.  Set ASYMCORR_BACKEND=python or =compiled to
force a choice (forcing 'compiled' without the extension raises).
"""

import os

from . import _loops_py

_requested = os.environ.get("ASYMCORR_BACKEND", "").strip().lower()

if _requested not in ("", "python", "compiled"):
    raise ImportError(
        f"ASYMCORR_BACKEND={_requested!r} not recognized; "
        "use 'python' or 'compiled'"
    )

if _requested == "python":
    filter_loop = _loops_py.filter_loop
    BACKEND = "python"
else:
    try:
        from . import _loops
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "ASYMCORR_BACKEND=compiled but the asymcorr._loops "
                "extension is not built"
            )
        filter_loop = _loops_py.filter_loop
        BACKEND = "python"
    else:
        filter_loop = _loops.filter_loop
        BACKEND = "compiled"


def get_backend():
    """Name of the active filter-loop backend: 'compiled' or 'python'."""
    return BACKEND
