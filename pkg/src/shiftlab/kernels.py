"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` twin. Set ``SHIFTLAB_PURE=1`` to force the
fallback.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("SHIFTLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend or python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

collatz_power = _impl.collatz_power
first_overlap = _impl.first_overlap
roundtrip_cycles = _impl.roundtrip_cycles
