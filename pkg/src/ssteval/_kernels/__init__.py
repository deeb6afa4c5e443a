"""Alignment kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
pure-Python twin is always available and can be forced with
SSTEVAL_PURE_PYTHON=1 (useful for the benchmark and for equivalence tests).
"""

import os

from . import _align_py

try:
    from . import _align_cy
except ImportError:  # extension not built on this install
    _align_cy = None


def get_backend(name=None):
    """Return the kernel module for `name` ('compiled', 'python' or None
    for the default choice)."""
    if name is None:
        name = "python" if os.environ.get("SSTEVAL_PURE_PYTHON") == "1" else "compiled"
    if name == "compiled":
        return _align_cy if _align_cy is not None else _align_py
    if name == "python":
        return _align_py
    raise ValueError(f"unknown kernel backend {name!r}")


_default = get_backend()
BACKEND = _default.BACKEND_NAME
edit_distance = _default.edit_distance
mwer_partition = _default.mwer_partition
