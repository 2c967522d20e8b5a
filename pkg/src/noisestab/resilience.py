"""Resilience certification: conditional-mean defects, variance supports,
cross-resilience, and the two implication checks between them.

Enumeration order is fixed for reproducible witnesses: subsets by size then
lexicographically, assignments lexicographically, first maximizer kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BoundViolation, BudgetExceededError, DomainError
from .fourier import (
    _cond_keepdims,
    component_variances_from_moments,
    conditional_second_moments,
    fourier_transform,
)
from .tables import TableFunction

COST_LIMIT = 10**9


def support_cost(n: int, q: int, r: int) -> int:
    """Elementary-operation estimate sum_{k<=r} C(n,k) q^k q^(n-k)."""
    return sum(math.comb(n, k) * q**k * q ** (n - k) for k in range(r + 1))


def _guard(f: TableFunction, r: int):
    cost = support_cost(f.n, f.q, r)
    if cost > COST_LIMIT:
        raise BudgetExceededError(
            f"subset enumeration needs ~{cost:.3g} operations (> {COST_LIMIT}); "
            "reduce r or n"
        )


@dataclass
class ResilienceCertificate:
    r: int
    defect: float
    alpha: float
    witness: tuple[tuple[int, ...], tuple[int, ...]]
    passed: bool


def resilience_defect(f: TableFunction, r: int, alpha: float) -> ResilienceCertificate:
    """Exact max of |E[f | X_S = z] - E[f]| over |S| <= r, z in Omega^S."""
    r = int(r)
    if not 0 <= r <= f.n:
        raise DomainError(f"r must lie in 0..{f.n}, got {r}")
    _guard(f, r)
    mean = f.expectation()
    t = f.tensor()
    best = 0.0
    witness: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
    for size in range(1, r + 1):
        for combo in combinations(range(f.n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            cond = np.asarray(_cond_keepdims(t, f.measure, mask, f.n))
            dev = np.abs(cond - mean)
            flat = dev.ravel(order="C")
            k = int(np.argmax(flat))
            if flat[k] > best:
                best = float(flat[k])
                z_full = np.unravel_index(k, dev.shape, order="C")
                witness = (
                    tuple(c + 1 for c in combo),
                    tuple(int(z_full[c]) for c in combo),
                )
    alpha = float(alpha)
    return ResilienceCertificate(
        r=r, defect=best, alpha=alpha, witness=witness, passed=best <= alpha
    )


def fourier_support(f: TableFunction, r: int, alpha: float):
    """{i : some S containing i with 0 < |S| <= r has Var[f_S] >= alpha^2}.

    Boolean uniform functions use the coefficient table (Var[f_S] = fhat(S)^2);
    the general case goes through conditional second moments.
    """
    r = int(r)
    alpha = float(alpha)
    if r < 1:
        raise DomainError("r must be >= 1")
    if alpha < 0.0:
        raise DomainError("alpha must be nonnegative")
    _guard(f, min(r, f.n))
    alpha2 = alpha * alpha
    found: set[int] = set()
    rmax = min(r, f.n)
    if f.q == 2 and f.is_uniform():
        coeffs = fourier_transform(f).coefficients
        for mask in range(1, f.size):
            if int(mask).bit_count() <= rmax and coeffs[mask] ** 2 >= alpha2:
                for i in range(f.n):
                    if mask >> i & 1:
                        found.add(i + 1)
        return tuple(sorted(found))
    masks = [0]
    for size in range(1, rmax + 1):
        for combo in combinations(range(f.n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            masks.append(mask)
    moments = conditional_second_moments(f, masks)
    for mask in masks:
        if mask == 0:
            continue
        if component_variances_from_moments(moments, mask) >= alpha2:
            for i in range(f.n):
                if mask >> i & 1:
                    found.add(i + 1)
    return tuple(sorted(found))


@dataclass
class CrossResilienceReport:
    passed: bool
    support_f: tuple[int, ...]
    support_g: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.passed


def cross_resilient(f: TableFunction, g: TableFunction, r: int, alpha: float) -> CrossResilienceReport:
    """True iff the (r,alpha) variance supports of f and g are disjoint."""
    if f.q != g.q or f.n != g.n:
        raise DomainError("cross-resilience needs a shared domain")
    sf = fourier_support(f, r, alpha)
    sg = fourier_support(g, r, alpha)
    return CrossResilienceReport(
        passed=not set(sf) & set(sg), support_f=sf, support_g=sg
    )


@dataclass
class SufficientConditionReport:
    premise_holds: bool
    max_low_coefficient: float
    threshold: float
    defect: float | None
    alpha: float
    certified: bool


def sufficient_condition_check(f: TableFunction, r: int, alpha: float) -> SufficientConditionReport:
    """Premise: all coefficients of order 1..r are at most 2^-r alpha in absolute
    value.  Whenever it holds, the conditional-mean defect at r must be <= alpha
    (triangle inequality over the at most 2^r - 1 low subsets); asserted.
    """
    if f.q != 2 or not f.is_uniform():
        raise DomainError("sufficient_condition_check needs q=2 uniform")
    r = int(r)
    if not 1 <= r <= f.n:
        raise DomainError(f"r must lie in 1..{f.n}")
    alpha = float(alpha)
    coeffs = fourier_transform(f).coefficients
    low = [
        abs(float(coeffs[mask]))
        for mask in range(1, f.size)
        if int(mask).bit_count() <= r
    ]
    max_low = max(low, default=0.0)
    threshold = 2.0**-r * alpha
    premise = max_low <= threshold
    defect = None
    certified = False
    if premise:
        cert = resilience_defect(f, r, alpha)
        defect = cert.defect
        certified = cert.defect <= alpha + 1e-12
        if not certified:
            raise BoundViolation(
                f"premise held but defect {cert.defect:.6g} > alpha {alpha:.6g}"
            )
    return SufficientConditionReport(
        premise_holds=premise,
        max_low_coefficient=max_low,
        threshold=threshold,
        defect=defect,
        alpha=alpha,
        certified=certified,
    )


@dataclass
class VarianceImplicationReport:
    premise_passed: bool
    defect: float
    alpha: float
    max_component_variance: float
    bound: float
    holds: bool | None


def resilience_implies_variance(f: TableFunction, r: int, alpha: float) -> VarianceImplicationReport:
    """(r,alpha)-resilient f must have Var[f_S] <= alpha^2 for 0 < |S| <= r.

    The defect premise is checked first; when it fails the variance side is
    still reported but nothing is asserted.
    """
    r = int(r)
    alpha = float(alpha)
    cert = resilience_defect(f, r, alpha)
    _guard(f, min(max(r, 1), f.n))
    rmax = min(r, f.n)
    masks = [0]
    for size in range(1, rmax + 1):
        for combo in combinations(range(f.n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            masks.append(mask)
    moments = conditional_second_moments(f, masks)
    max_var = max(
        (
            component_variances_from_moments(moments, mask)
            for mask in masks
            if mask
        ),
        default=0.0,
    )
    bound = alpha * alpha
    if not cert.passed:
        return VarianceImplicationReport(
            premise_passed=False,
            defect=cert.defect,
            alpha=alpha,
            max_component_variance=max_var,
            bound=bound,
            holds=None,
        )
    holds = max_var <= bound + 1e-12
    if not holds:
        raise BoundViolation(
            f"resilient function has component variance {max_var:.6g} > alpha^2"
        )
    return VarianceImplicationReport(
        premise_passed=True,
        defect=cert.defect,
        alpha=alpha,
        max_component_variance=max_var,
        bound=bound,
        holds=True,
    )
