"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension ``kgyukawa._numerov_core`` is used when it imports;
set ``KGYUKAWA_PURE_PYTHON=1`` to force the fallback.  Both backends expose
``numerov_propagate(f, h, u0, u1)`` and ``count_sign_changes(u)``.
"""
import os

from . import _numerov_py as python_backend

compiled_backend = None
if not os.environ.get("KGYUKAWA_PURE_PYTHON"):
    try:
        from . import _numerov_core as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

numerov_propagate = backend.numerov_propagate
count_sign_changes = backend.count_sign_changes
