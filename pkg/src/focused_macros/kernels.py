"""Backend selection for the search kernel.

The compiled extension is used when it imports; otherwise the pure-Python
kernel is used.  Setting ``FOCUSED_MACROS_PURE_PYTHON=1`` forces the
fallback.  Both backends return identical results.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernel_py
from ._kernel_py import FOCUS, FOCUS_INF, GREEDY

__all__ = ["BACKEND", "FOCUS", "FOCUS_INF", "GREEDY", "backends", "run_search"]

_backends = {"python": _kernel_py.run_search}
try:
    from . import _kernel  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _kernel = None
else:
    _backends["compiled"] = _kernel.run_search

if os.environ.get("FOCUSED_MACROS_PURE_PYTHON", "") not in ("", "0") or _kernel is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"


def backends() -> list[str]:
    return sorted(_backends)


def run_search(table, start, *, budget, mode, goal=None, origin=None, lifo=False, backend=None):
    """Run the kernel over an ``ActionTable``; see ``_kernel_py`` for the contract."""
    impl = _backends[backend or BACKEND]
    n = table.n_vars
    start = np.ascontiguousarray(start, dtype=np.uint8)
    if goal is None:
        goal = np.full(n, -1, dtype=np.int16)
    goal = np.ascontiguousarray(goal, dtype=np.int16)
    if origin is None:
        origin = start
    origin = np.ascontiguousarray(origin, dtype=np.uint8)
    return impl(
        table.maps,
        table.pre_start,
        table.pre_var,
        table.pre_val,
        start,
        goal,
        int(budget),
        int(mode),
        origin,
        bool(lifo),
    )
