# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Hot enumeration kernels over product distributions with few atoms per step.

Both kernels walk all m^n tuples of per-step atoms with an odometer whose
fastest digit is the last position, so prefix weights and prefix table
indices are recomputed only from the changed digit onward.

Inputs:
  tables      (ell, q**n) float64, table j flattened with coordinate 1 as
              the lowest-order base-q digit
  atom_digits (m, ell) int64, symbol of margin j under each atom
  weights     (m,) float64, atom probabilities
"""

import numpy as np


def support_product_sum(double[:, ::1] tables, long long[:, ::1] atom_digits,
                        double[::1] weights, Py_ssize_t n, Py_ssize_t q):
    """sum over atom tuples of weight * prod_j tables[j][index_j]."""
    cdef Py_ssize_t m = weights.shape[0]
    cdef Py_ssize_t ell = tables.shape[0]
    cdef long long[::1] d = np.zeros(max(n, 1), dtype=np.int64)
    cdef double[::1] pw = np.ones(n + 1)
    cdef long long[:, ::1] pidx = np.zeros((n + 1, ell), dtype=np.int64)
    cdef long long[::1] qpow = np.array(
        [q**p for p in range(max(n, 1))], dtype=np.int64)
    cdef double acc = 0.0, prod
    cdef Py_ssize_t p, j, pos
    for p in range(n):
        pw[p + 1] = pw[p] * weights[d[p]]
        for j in range(ell):
            pidx[p + 1, j] = pidx[p, j] + atom_digits[d[p], j] * qpow[p]
    while True:
        prod = pw[n]
        for j in range(ell):
            prod *= tables[j, pidx[n, j]]
        acc += prod
        pos = n - 1
        while pos >= 0 and d[pos] == m - 1:
            d[pos] = 0
            pos -= 1
        if pos < 0:
            break
        d[pos] += 1
        for p in range(pos, n):
            pw[p + 1] = pw[p] * weights[d[p]]
            for j in range(ell):
                pidx[p + 1, j] = pidx[p, j] + atom_digits[d[p], j] * qpow[p]
    return acc


def support_equality_mass(double[:, ::1] tables, long long[:, ::1] atom_digits,
                          double[::1] weights, Py_ssize_t n, Py_ssize_t q):
    """Probability mass of atom tuples on which all ell table values coincide."""
    cdef Py_ssize_t m = weights.shape[0]
    cdef Py_ssize_t ell = tables.shape[0]
    cdef long long[::1] d = np.zeros(max(n, 1), dtype=np.int64)
    cdef double[::1] pw = np.ones(n + 1)
    cdef long long[:, ::1] pidx = np.zeros((n + 1, ell), dtype=np.int64)
    cdef long long[::1] qpow = np.array(
        [q**p for p in range(max(n, 1))], dtype=np.int64)
    cdef double acc = 0.0, v0
    cdef Py_ssize_t p, j, pos
    cdef bint same
    for p in range(n):
        pw[p + 1] = pw[p] * weights[d[p]]
        for j in range(ell):
            pidx[p + 1, j] = pidx[p, j] + atom_digits[d[p], j] * qpow[p]
    while True:
        v0 = tables[0, pidx[n, 0]]
        same = True
        for j in range(1, ell):
            if tables[j, pidx[n, j]] != v0:
                same = False
                break
        if same:
            acc += pw[n]
        pos = n - 1
        while pos >= 0 and d[pos] == m - 1:
            d[pos] = 0
            pos -= 1
        if pos < 0:
            break
        d[pos] += 1
        for p in range(pos, n):
            pw[p + 1] = pw[p] * weights[d[p]]
            for j in range(ell):
                pidx[p + 1, j] = pidx[p, j] + atom_digits[d[p], j] * qpow[p]
    return acc
