"""Kernel selection: the compiled extension when importable, else numpy.

Set ``WREATHCOUNT_PURE=1`` to force the pure-Python backend (used by the
benchmark and by the backend-agreement tests).
"""

import os

if os.environ.get("WREATHCOUNT_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = "cython" if _impl.__name__.endswith("._kernels") else "python"

kronecker = _impl.kronecker
kronecker_table = _impl.kronecker_table
squarefree_flags = _impl.squarefree_flags
fundamental_discriminants = _impl.fundamental_discriminants
odd_char_moment = _impl.odd_char_moment
even_logsin_sum = _impl.even_logsin_sum
l2_partial = _impl.l2_partial
count_reduced_forms = _impl.count_reduced_forms

__all__ = [
    "BACKEND",
    "kronecker",
    "kronecker_table",
    "squarefree_flags",
    "fundamental_discriminants",
    "odd_char_moment",
    "even_logsin_sum",
    "l2_partial",
    "count_reduced_forms",
]
