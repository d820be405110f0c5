"""Expectimin kernel selection.

The compiled extension is used when it imports; set ``UML_ARENA_PURE=1`` to
force the pure-Python fallback.
"""

import os

from . import _pykernel

py_expectimin_values = _pykernel.expectimin_values

try:
    if os.environ.get("UML_ARENA_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python kernel requested")
    from ._ckernel import expectimin_values as c_expectimin_values
except ImportError:
    c_expectimin_values = None

if c_expectimin_values is not None:
    expectimin_values = c_expectimin_values
    BACKEND = "cython"
else:
    expectimin_values = py_expectimin_values
    BACKEND = "python"
