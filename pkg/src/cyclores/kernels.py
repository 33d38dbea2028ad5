"""Backend selection for the recurrence kernels.

The compiled extension is preferred when it imported cleanly; the pure
Python twin is the fallback and can be forced (for testing or debugging)
by setting the environment variable ``CYCLORES_PURE_PY`` to a non-empty
value before import.  ``BACKEND`` records which one is active.
"""

import os

if os.environ.get("CYCLORES_PURE_PY"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

hermite_norm = _impl.hermite_norm
laguerre_i = _impl.laguerre_i
displacement_ln_row = _impl.displacement_ln_row

__all__ = ["BACKEND", "hermite_norm", "laguerre_i", "displacement_ln_row"]
