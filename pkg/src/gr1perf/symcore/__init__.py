"""Decision-diagram kernel, symbolic sets, and the explicit-state oracle.

The node store is provided by a compiled extension when it has been
built and by a pure-Python implementation otherwise.  Setting the
environment variable ``GR1PERF_PURE=1`` forces the pure-Python kernel.
"""

import os

from . import _pykernel

if os.environ.get("GR1PERF_PURE"):
    _compiled = None
else:
    try:
        from . import _kernel as _compiled
    except ImportError:
        _compiled = None

#: kernel class used by default for new managers
Kernel = _compiled.Kernel if _compiled is not None else _pykernel.Kernel
PyKernel = _pykernel.Kernel
CompiledKernel = _compiled.Kernel if _compiled is not None else None
BACKEND = Kernel.backend

from .manager import (  # noqa: E402
    AND, DIFF, IMPLIES, OR, XOR, DDManager, ManagerMismatch, Owner,
    SymbolicSet, VarInfo,
)

__all__ = [
    "AND", "OR", "XOR", "IMPLIES", "DIFF", "BACKEND", "CompiledKernel",
    "DDManager", "Kernel", "ManagerMismatch", "Owner", "PyKernel",
    "SymbolicSet", "VarInfo",
]
