"""Fourier expansion (Boolean uniform) and Efron-Stein decomposition (general).

Subsets of coordinates are bitmasks: bit i-1 set <=> coordinate i in S.
Characters use the symbol encoding of `tables`: chi_S(x) = (-1)^{popcount(x & S)}.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError
from .tables import TableFunction

__all__ = [
    "FourierExpansion",
    "EfronSteinDecomposition",
    "fourier_transform",
    "inverse_fourier",
    "efron_stein",
    "mask_of",
    "coords_of",
    "conditional_second_moments",
    "component_variances_from_moments",
]


def mask_of(S: Iterable[int], n: int) -> int:
    mask = 0
    for i in S:
        if not 1 <= i <= n:
            raise DomainError(f"coordinate {i} outside 1..{n}")
        mask |= 1 << (i - 1)
    return mask


def coords_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def _walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized transform: out[S] = sum_x (-1)^{popcount(x & S)} values[x]."""
    a = values.copy()
    h = 1
    while h < a.shape[0]:
        a = a.reshape(-1, 2 * h)
        lo = a[:, :h].copy()
        hi = a[:, h:].copy()
        a[:, :h] = lo + hi
        a[:, h:] = lo - hi
        a = a.reshape(-1)
        h *= 2
    return a


class FourierExpansion:
    """Boolean-uniform Fourier coefficients, indexed by subset bitmask."""

    def __init__(self, n: int, coefficients: np.ndarray | Mapping[int, float]):
        self.n = int(n)
        if isinstance(coefficients, Mapping):
            dense = np.zeros(2**self.n)
            for mask, c in coefficients.items():
                dense[mask] = c
            coefficients = dense
        coefficients = np.asarray(coefficients, dtype=np.float64)
        if coefficients.shape != (2**self.n,):
            raise DomainError("coefficient array must have length 2^n")
        self.coefficients = coefficients.copy()
        self.coefficients.setflags(write=False)

    def coefficient(self, S: Iterable[int] | int) -> float:
        mask = S if isinstance(S, int) else mask_of(S, self.n)
        return float(self.coefficients[mask])

    def as_dict(self, tol: float = 0.0) -> dict[int, float]:
        return {
            mask: float(c)
            for mask, c in enumerate(self.coefficients)
            if abs(c) > tol or (tol == 0.0 and c != 0.0)
        }

    def weight_at_degree(self, k: int) -> float:
        return float(
            sum(
                c * c
                for mask, c in enumerate(self.coefficients)
                if int(mask).bit_count() == k
            )
        )

    def __repr__(self):
        nz = sum(1 for c in self.coefficients if c != 0.0)
        return f"FourierExpansion(n={self.n}, nonzero={nz})"


def fourier_transform(f: TableFunction) -> FourierExpansion:
    """f-hat(S) = E[f * chi_S] for the Boolean alphabet under the uniform measure."""
    if f.q != 2 or not f.is_uniform():
        raise DomainError(
            "fourier_transform supports q=2 with the uniform measure only; "
            "use efron_stein for general domains"
        )
    if f.n == 0:
        return FourierExpansion(0, f.values)
    return FourierExpansion(f.n, _walsh_hadamard(f.values) / f.size)


def inverse_fourier(expansion: FourierExpansion, range_tag: str = "unrestricted") -> TableFunction:
    if expansion.n == 0:
        values = expansion.coefficients
    else:
        values = _walsh_hadamard(expansion.coefficients)
    return TableFunction(2, expansion.n, values, None, range_tag)


def _cond_keepdims(t: np.ndarray, pi: np.ndarray, keep_mask: int, n: int) -> np.ndarray:
    """E[f | X_T] as a broadcastable tensor (size 1 on the averaged axes)."""
    out = t
    for ax in range(n):
        if not keep_mask >> ax & 1:
            shape = [1] * out.ndim
            shape[ax] = pi.shape[0]
            out = (out * pi.reshape(shape)).sum(axis=ax, keepdims=True)
    return out


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class EfronSteinDecomposition:
    """Orthogonal decomposition f = sum_S f_S with f_S depending only on S.

    components maps each subset bitmask to a full-arity TableFunction (constant
    along coordinates outside S); component_variances maps S to Var[f_S].
    """

    def __init__(
        self,
        q: int,
        n: int,
        components: Mapping[int, TableFunction],
        component_variances: Mapping[int, float],
    ):
        self.q = q
        self.n = n
        self.components = dict(components)
        self.component_variances = dict(component_variances)

    def reconstruction(self) -> np.ndarray:
        total = np.zeros(self.q**self.n)
        for comp in self.components.values():
            total += comp.values
        return total

    def variance_above(self, r: int) -> float:
        return float(
            sum(
                v
                for mask, v in self.component_variances.items()
                if int(mask).bit_count() > r
            )
        )

    def __repr__(self):
        return f"EfronSteinDecomposition(q={self.q}, n={self.n}, components={len(self.components)})"


def efron_stein(f: TableFunction) -> EfronSteinDecomposition:
    """Inclusion-exclusion over conditional expectations, all 2^n components."""
    t = f.tensor()
    pi = f.measure
    n = f.n
    cond = [_cond_keepdims(t, pi, mask, n) for mask in range(2**n)]
    full_shape = (f.q,) * n
    components: dict[int, TableFunction] = {}
    variances: dict[int, float] = {}
    for mask in range(2**n):
        acc = np.zeros(full_shape) if n else np.zeros(())
        bits = int(mask).bit_count()
        for sub in _submasks(mask):
            sign = -1.0 if (bits - int(sub).bit_count()) % 2 else 1.0
            acc = acc + sign * cond[sub]
        comp = TableFunction(f.q, n, np.asarray(acc).ravel(order="F"), pi)
        components[mask] = comp
        variances[mask] = 0.0 if mask == 0 else comp.variance()
    return EfronSteinDecomposition(f.q, n, components, variances)


def conditional_second_moments(f: TableFunction, masks: Iterable[int]) -> dict[int, float]:
    """Q(U) = E[(E[f | X_U])^2] for each requested subset mask.

    For a product measure E[g_T g_{T'}] = Q(T intersect T'), so component
    variances follow by Mobius inversion without materializing components.
    """
    t = f.tensor()
    pi = f.measure
    n = f.n
    out: dict[int, float] = {}
    for mask in masks:
        cond = _cond_keepdims(t, pi, mask, n)
        sq = cond * cond
        for ax in range(n):
            if mask >> ax & 1:
                shape = [1] * sq.ndim
                shape[ax] = pi.shape[0]
                sq = (sq * pi.reshape(shape)).sum(axis=ax, keepdims=True)
        out[mask] = float(np.asarray(sq).reshape(()))
    return out


def component_variances_from_moments(moments: Mapping[int, float], mask: int) -> float:
    """Var[f_S] = sum_{T subseteq S} (-1)^{|S \\ T|} Q(T) for S nonempty."""
    if mask == 0:
        return 0.0
    bits = int(mask).bit_count()
    total = 0.0
    for sub in _submasks(mask):
        sign = -1.0 if (bits - int(sub).bit_count()) % 2 else 1.0
        total += sign * moments[sub]
    return max(total, 0.0)
