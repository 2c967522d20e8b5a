"""Enumeration kernels: compiled extension when available, numpy fallback otherwise.

Set NOISESTAB_FORCE_FALLBACK=1 to skip the extension (checked at import time).
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("NOISESTAB_FORCE_FALLBACK"):
    _impl = _fallback
    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "fallback"


def support_product_sum(tables, atom_digits, weights, n, q):
    tables = np.ascontiguousarray(tables, dtype=np.float64)
    atom_digits = np.ascontiguousarray(atom_digits, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return _impl.support_product_sum(tables, atom_digits, weights, int(n), int(q))


def support_equality_mass(tables, atom_digits, weights, n, q):
    tables = np.ascontiguousarray(tables, dtype=np.float64)
    atom_digits = np.ascontiguousarray(atom_digits, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    return _impl.support_equality_mass(tables, atom_digits, weights, int(n), int(q))
