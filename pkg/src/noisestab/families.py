"""Named Boolean function families (q=2, uniform measure, +-1 values).

Symbol encoding as in `tables`: symbol 0 -> +1, symbol 1 -> -1.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .tables import TableFunction

__all__ = [
    "majority",
    "dictator",
    "parity",
    "tribes",
    "threshold",
    "dictator_times_majority",
]


def _sign_table(n: int) -> np.ndarray:
    """signs[x, i] = +-1 value of coordinate i+1 at table index x."""
    idx = np.arange(2**n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)) & 1
    return 1.0 - 2.0 * bits


def majority(n: int) -> TableFunction:
    if n < 1 or n % 2 == 0:
        raise DomainError("majority needs odd arity")
    s = _sign_table(n).sum(axis=1)
    return TableFunction(2, n, np.sign(s), range_tag="pm_one")


def dictator(n: int, i: int = 1) -> TableFunction:
    if not 1 <= i <= n:
        raise DomainError(f"coordinate {i} outside 1..{n}")
    return TableFunction(2, n, _sign_table(n)[:, i - 1], range_tag="pm_one")


def parity(n: int, S=None) -> TableFunction:
    if S is None:
        S = range(1, n + 1)
    cols = []
    for i in S:
        if not 1 <= i <= n:
            raise DomainError(f"coordinate {i} outside 1..{n}")
        cols.append(i - 1)
    signs = _sign_table(n)
    vals = np.ones(2**n) if not cols else signs[:, cols].prod(axis=1)
    return TableFunction(2, n, vals, range_tag="pm_one")


def tribes(w: int, s: int) -> TableFunction:
    """OR of s disjoint ANDs of width w; +1 iff some tribe is all +1."""
    if w < 1 or s < 1:
        raise DomainError("tribes needs positive width and tribe count")
    n = w * s
    signs = _sign_table(n)
    any_true = np.zeros(2**n, dtype=bool)
    for j in range(s):
        block = signs[:, j * w : (j + 1) * w]
        any_true |= (block > 0).all(axis=1)
    return TableFunction(2, n, np.where(any_true, 1.0, -1.0), range_tag="pm_one")


def threshold(n: int, a: int) -> TableFunction:
    """+1 iff the +-1 coordinate sum is >= a."""
    s = _sign_table(n).sum(axis=1)
    return TableFunction(2, n, np.where(s >= a, 1.0, -1.0), range_tag="pm_one")


def dictator_times_majority(n: int) -> TableFunction:
    """f(x) = x_1 * sign(x_2 + ... + x_n); needs n even so the tail has no ties."""
    if n < 2 or n % 2 == 1:
        raise DomainError("dictator_times_majority needs even arity")
    signs = _sign_table(n)
    tail = signs[:, 1:].sum(axis=1)
    return TableFunction(2, n, signs[:, 0] * np.sign(tail), range_tag="pm_one")
