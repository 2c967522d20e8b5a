"""Pure-numpy versions of the enumeration kernels, chunked to bound memory.

Same contracts as _core; roughly 10-20x slower but dependency-free.
"""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 18


def _decode(tt: np.ndarray, atom_digits, weights, n: int, q: int):
    """Per-point weight and per-margin table indices for atom-tuple codes tt."""
    ell = atom_digits.shape[1]
    m = weights.shape[0]
    w = np.ones(tt.shape[0])
    idx = np.zeros((ell, tt.shape[0]), dtype=np.int64)
    rem = tt.copy()
    qpow = 1
    for _ in range(n):
        d = rem % m
        rem //= m
        w *= weights[d]
        for j in range(ell):
            idx[j] += atom_digits[d, j] * qpow
        qpow *= q
    return w, idx


def support_product_sum(tables, atom_digits, weights, n, q):
    tables = np.asarray(tables, dtype=np.float64)
    atom_digits = np.asarray(atom_digits, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    m = weights.shape[0]
    total = m**int(n)
    acc = 0.0
    for start in range(0, total, CHUNK):
        tt = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        w, idx = _decode(tt, atom_digits, weights, int(n), int(q))
        vals = w
        for j in range(tables.shape[0]):
            vals = vals * tables[j, idx[j]]
        acc += float(vals.sum())
    return acc


def support_equality_mass(tables, atom_digits, weights, n, q):
    tables = np.asarray(tables, dtype=np.float64)
    atom_digits = np.asarray(atom_digits, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    m = weights.shape[0]
    total = m**int(n)
    acc = 0.0
    for start in range(0, total, CHUNK):
        tt = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        w, idx = _decode(tt, atom_digits, weights, int(n), int(q))
        same = np.ones(tt.shape[0], dtype=bool)
        v0 = tables[0, idx[0]]
        for j in range(1, tables.shape[0]):
            same &= tables[j, idx[j]] == v0
        acc += float(w[same].sum())
    return acc
