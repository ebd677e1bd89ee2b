"""Closure engine backend selection.

The fixpoint closure is the hot inner loop of both the kernel and the
planner.  A Cython build of it is used when available; the pure-Python
implementation is the fallback.  Set ``EPIPLAN_PURE_PYTHON=1`` to force
the fallback (useful for debugging and for the benchmark).
"""

import os

from ._engine_py import Conflict  # noqa: F401  (shared exception type)

if os.environ.get("EPIPLAN_PURE_PYTHON"):
    from ._engine_py import BACKEND, close_level  # noqa: F401
else:
    try:
        from ._engine_c import close_level  # noqa: F401

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build environment
        from ._engine_py import BACKEND, close_level  # noqa: F401
