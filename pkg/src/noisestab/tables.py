"""Dense table representation of functions f : Omega^n -> R under a product measure.

Conventions, used consistently across the package:
  - symbols are 0..q-1; for q=2 the +-1 interpretation is symbol 0 -> +1,
    symbol 1 -> -1 (so chi_S(x) = (-1)^{popcount} matches the index bits);
  - tables are row-major with coordinate 1 as the lowest-order digit:
    index(x) = sum_i x_i * q^(i-1);
  - public coordinate labels are 1-based (coordinate i, 1 <= i <= n).
"""

from __future__ import annotations

import json
import os
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InvalidKernelError

PROB_TOL = 1e-12
RANGE_TAGS = ("unit_interval", "pm_one", "unrestricted")


def uniform_measure(q: int) -> np.ndarray:
    return np.full(q, 1.0 / q)


class TableFunction:
    """A function on Omega^n stored as a dense value table.

    The attached measure is one probability vector on Omega, shared by all
    coordinates (the product measure pi^n).
    """

    def __init__(self, q, n, values, measure=None, range_tag="unrestricted"):
        q = int(q)
        n = int(n)
        if q < 2:
            raise DomainError(f"alphabet size must be >= 2, got {q}")
        if n < 0:
            raise DomainError(f"arity must be >= 0, got {n}")
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (q**n,):
            raise DomainError(
                f"values must have length q^n = {q ** n}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("values must be finite")
        if measure is None:
            measure = uniform_measure(q)
        measure = np.asarray(measure, dtype=np.float64)
        if measure.shape != (q,):
            raise DomainError(f"measure must have length q = {q}")
        if measure.min() < -PROB_TOL or abs(measure.sum() - 1.0) > PROB_TOL:
            raise DomainError("measure entries must be nonnegative and sum to 1")
        if range_tag not in RANGE_TAGS:
            raise DomainError(f"unknown range tag {range_tag!r}")
        if range_tag == "unit_interval":
            if values.min() < -PROB_TOL or values.max() > 1.0 + PROB_TOL:
                raise DomainError("unit_interval function has values outside [0,1]")
        elif range_tag == "pm_one":
            if not np.all(np.isin(values, (-1.0, 1.0))):
                raise DomainError("pm_one function has values outside {-1,+1}")
        self.q = q
        self.n = n
        self.values = values.copy()
        self.values.setflags(write=False)
        self.measure = measure.copy()
        self.measure.setflags(write=False)
        self.range_tag = range_tag

    # -- basic structure ---------------------------------------------------

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def is_uniform(self) -> bool:
        return bool(np.allclose(self.measure, 1.0 / self.q, atol=PROB_TOL))

    def tensor(self) -> np.ndarray:
        """Shape (q,)*n view with axis k corresponding to coordinate k+1."""
        return self.values.reshape((self.q,) * self.n, order="F")

    def index_of(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise DomainError("point has wrong arity")
        idx = 0
        for i, sym in enumerate(x):
            if not 0 <= sym < self.q:
                raise DomainError(f"symbol {sym} outside alphabet")
            idx += sym * self.q**i
        return idx

    def __call__(self, x: Sequence[int]) -> float:
        return float(self.values[self.index_of(x)])

    def weights(self) -> np.ndarray:
        """Product-measure weight of every point, aligned with `values`."""
        if self.n == 0:
            return np.ones(1)
        return reduce(np.kron, [self.measure] * self.n)

    def expectation(self) -> float:
        return float(self.values @ self.weights())

    def variance(self) -> float:
        w = self.weights()
        m = float(self.values @ w)
        return max(float((self.values**2) @ w) - m * m, 0.0)

    # -- copies ------------------------------------------------------------

    def with_measure(self, measure) -> "TableFunction":
        return TableFunction(self.q, self.n, self.values, measure, self.range_tag)

    def with_range_tag(self, range_tag: str) -> "TableFunction":
        return TableFunction(self.q, self.n, self.values, self.measure, range_tag)

    def __repr__(self):
        return (
            f"TableFunction(q={self.q}, n={self.n}, range={self.range_tag}, "
            f"mean={self.expectation():.6g})"
        )


def _check_coord(f: TableFunction, i: int) -> int:
    if not 1 <= i <= f.n:
        raise DomainError(f"coordinate {i} outside 1..{f.n}")
    return i - 1


def _check_coord_set(f: TableFunction, S: Iterable[int]) -> list[int]:
    S = list(S)
    if len(set(S)) != len(S):
        raise DomainError("coordinate set has repeats")
    return [_check_coord(f, i) for i in S]


def _expect_tensor(t: np.ndarray, pi: np.ndarray) -> float:
    for _ in range(t.ndim):
        t = np.tensordot(t, pi, axes=([0], [0]))
    return float(t)


def restrict(f: TableFunction, S: Iterable[int], z: Sequence[int]) -> TableFunction:
    """Pin the coordinates S (1-based) to the symbols z; arity drops by |S|.

    Surviving coordinates keep their relative order.
    """
    axes = _check_coord_set(f, S)
    z = list(z)
    if len(z) != len(axes):
        raise DomainError("assignment length does not match coordinate set")
    indexer: list = [slice(None)] * f.n
    for ax, sym in zip(axes, z):
        if not 0 <= sym < f.q:
            raise DomainError(f"symbol {sym} outside alphabet")
        indexer[ax] = sym
    sub = f.tensor()[tuple(indexer)]
    return TableFunction(
        f.q, f.n - len(axes), sub.ravel(order="F"), f.measure, f.range_tag
    )


def conditional_expectation(f: TableFunction, S: Iterable[int]) -> TableFunction:
    """z -> E[f | X_S = z] as a table on Omega^S (coordinates sorted ascending)."""
    axes = sorted(_check_coord_set(f, S))
    t = f.tensor()
    for ax in sorted(set(range(f.n)) - set(axes), reverse=True):
        t = np.tensordot(t, f.measure, axes=([ax], [0]))
    tag = f.range_tag if f.range_tag != "pm_one" else "unrestricted"
    return TableFunction(f.q, len(axes), t.ravel(order="F"), f.measure, tag)


def influence(f: TableFunction, i: int) -> float:
    """E[Var[f | all coordinates except i]] under the product measure."""
    ax = _check_coord(f, i)
    t = f.tensor()
    m1 = np.tensordot(t, f.measure, axes=([ax], [0]))
    m2 = np.tensordot(t * t, f.measure, axes=([ax], [0]))
    var = np.maximum(m2 - m1 * m1, 0.0)
    return _expect_tensor(var, f.measure)


def influences(f: TableFunction) -> np.ndarray:
    """All coordinate influences, entry i-1 for coordinate i."""
    return np.array([influence(f, i) for i in range(1, f.n + 1)])


def total_influence(f: TableFunction) -> float:
    return float(influences(f).sum()) if f.n else 0.0


def _resolve_kernel(f: TableFunction, eta) -> np.ndarray:
    if np.isscalar(eta):
        eta = float(eta)
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"noise parameter must lie in [0,1], got {eta}")
        return eta * np.eye(f.q) + (1.0 - eta) * np.outer(
            np.ones(f.q), f.measure
        )
    K = np.asarray(eta, dtype=np.float64)
    if K.shape != (f.q, f.q):
        raise InvalidKernelError(f"kernel must be {f.q}x{f.q}, got {K.shape}")
    if K.min() < -PROB_TOL or not np.allclose(K.sum(axis=1), 1.0, atol=PROB_TOL):
        raise InvalidKernelError("kernel rows must be probability vectors")
    return K


def noise_operator(f: TableFunction, eta) -> TableFunction:
    """Apply the per-coordinate averaging operator.

    Scalar eta in [0,1]: each coordinate is kept with probability eta and
    resampled from the attached measure otherwise (the Boolean-uniform case
    multiplies the degree-|S| component by eta^{|S|}).  A q x q row-stochastic
    kernel applies (Tf)(x) = E[f(Y) | X=x] per coordinate; the expectation is
    preserved exactly when the kernel leaves the measure invariant.
    """
    K = _resolve_kernel(f, eta)
    t = f.tensor()
    for ax in range(f.n):
        t = np.moveaxis(np.tensordot(t, K, axes=([ax], [1])), -1, ax)
    values = t.ravel(order="F")
    tag = f.range_tag
    if tag == "unit_interval":
        values = np.clip(values, 0.0, 1.0)
    elif tag == "pm_one":
        tag = "unrestricted"
    return TableFunction(f.q, f.n, values, f.measure, tag)


def to_pm_one(f: TableFunction) -> TableFunction:
    """Explicit affine conversion {0,1} -> {-1,+1} (x -> 2x-1)."""
    return TableFunction(f.q, f.n, 2.0 * f.values - 1.0, f.measure, "pm_one")


def to_unit_interval(f: TableFunction) -> TableFunction:
    """Explicit affine conversion {-1,+1} -> {0,1} (x -> (1+x)/2)."""
    return TableFunction(f.q, f.n, (1.0 + f.values) / 2.0, f.measure, "unit_interval")


def negate_inputs(f: TableFunction) -> TableFunction:
    """g(x) = f(-x): swap the two symbols in every coordinate (q=2 only)."""
    if f.q != 2:
        raise DomainError("input negation is defined for the Boolean alphabet")
    t = f.tensor()
    for ax in range(f.n):
        t = np.flip(t, axis=ax)
    return TableFunction(f.q, f.n, t.ravel(order="F"), f.measure, f.range_tag)


# -- JSON interchange ------------------------------------------------------


def function_to_json_dict(f: TableFunction) -> dict:
    d = {"q": f.q, "n": f.n, "values": [float(v) for v in f.values]}
    if not f.is_uniform():
        d["measure"] = [float(p) for p in f.measure]
    if f.range_tag != "unrestricted":
        d["range"] = f.range_tag
    return d


def function_from_json_dict(d: dict) -> TableFunction:
    try:
        q = d["q"]
        n = d["n"]
        values = d["values"]
    except KeyError as exc:
        raise DomainError(f"function JSON missing field {exc.args[0]!r}") from exc
    return TableFunction(
        q, n, values, d.get("measure"), d.get("range", "unrestricted")
    )


def load_function(path: str | os.PathLike) -> TableFunction:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: malformed JSON ({exc})") from exc
    try:
        return function_from_json_dict(d)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def save_function(f: TableFunction, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(function_to_json_dict(f), fh, sort_keys=True)
        fh.write("\n")
