"""Connected-component labelling kernel, compiled when available.

The Cython extension ``aida._unionfind`` is used when it was built; otherwise
the pure-Python implementation is loaded. Set ``AIDA_PURE_PYTHON=1`` to force
the fallback. ``BACKEND`` names the kernel in use.
"""
from __future__ import annotations

import os
from array import array
from typing import Sequence

from aida import _unionfind_py

if os.environ.get("AIDA_PURE_PYTHON", "") not in ("", "0"):
    _kernel = _unionfind_py
    BACKEND = "python"
else:
    try:
        from aida import _unionfind as _kernel  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _kernel = _unionfind_py
        BACKEND = "python"


def as_index_array(values: Sequence[int]) -> array:
    """The signed 64-bit buffer both kernels accept."""
    if isinstance(values, array) and values.typecode == "q":
        return values
    return array("q", values)


def label_components(n: int, sources: Sequence[int], targets: Sequence[int]) -> array:
    """Smallest node index of each node's component; see :mod:`aida._unionfind_py`."""
    return _kernel.label_components(n, as_index_array(sources), as_index_array(targets))
