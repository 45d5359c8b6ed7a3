"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``MIXEDCORE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("MIXEDCORE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

if compiled_kernels is not None:
    BACKEND = "cython"
    peel_csr = compiled_kernels.peel_csr
    xor_solve = compiled_kernels.xor_solve
else:
    BACKEND = "python"
    peel_csr = python_kernels.peel_csr
    xor_solve = python_kernels.xor_solve
