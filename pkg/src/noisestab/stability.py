"""Noisy inner products and multi-function correlations under a step law.

All exact paths use the attached law's own marginals for the outer
expectation; the attached measure of the input functions is not consulted,
so the caller controls consistency explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .distributions import (
    StepDistribution,
    marginals,
    pair_marginal,
    rho_max,
    sample,
)
from .errors import (
    BoundViolation,
    BudgetExceededError,
    DegenerateDistributionError,
    DomainError,
)
from .rng import chunk_streams
from .tables import TableFunction, noise_operator

Z99 = 2.5758293035489004  # two-sided 99% normal quantile
EXACT_BUDGET = 10**8
MC_CHUNK = 1 << 16


def noisy_inner_product(f: TableFunction, g: TableFunction, rho: float) -> float:
    """<f,g>_rho = sum_S rho^|S| fhat(S) ghat(S), Boolean uniform inputs."""
    if f.q != 2 or g.q != 2 or not (f.is_uniform() and g.is_uniform()):
        raise DomainError("noisy_inner_product needs q=2 with uniform measures")
    if f.n != g.n:
        raise DomainError(f"arity mismatch: {f.n} vs {g.n}")
    rho = float(rho)
    if not -1.0 <= rho <= 1.0:
        raise DomainError("correlation must lie in [-1,1]")
    from .fourier import _walsh_hadamard

    if f.n == 0:
        return float(f.values[0] * g.values[0])
    fh = _walsh_hadamard(f.values) / f.size
    gh = _walsh_hadamard(g.values) / g.size
    masks = np.arange(f.size, dtype=np.int64)
    degrees = np.array([int(m).bit_count() for m in masks])
    return float(np.sum(rho**degrees * fh * gh))


def _check_function_against(P: StepDistribution, f: TableFunction, n: int | None):
    if f.q != P.q:
        raise DomainError(f"alphabet mismatch: function q={f.q}, distribution q={P.q}")
    if n is not None and f.n != n:
        raise DomainError("all functions must share one arity")
    return f.n


def _apply_channel(g: TableFunction, K: np.ndarray) -> np.ndarray:
    """Per-coordinate (Tg)(x) = E[g(Y)|X=x] as a flat table."""
    t = g.tensor()
    for ax in range(g.n):
        t = np.moveaxis(np.tensordot(t, K, axes=([ax], [1])), -1, ax)
    return np.asarray(t).ravel(order="F")


def pair_correlation(f: TableFunction, g: TableFunction, P: StepDistribution) -> float:
    """<f,g>_P = E[f(X) g(Y)] with (X_i, Y_i) i.i.d. from the 2-step law P.

    Computed as E_X[f * (Tg)] where T conditions per coordinate; cost
    O(n q^2 q^n) instead of |supp|^n enumeration.
    """
    if P.steps != 2:
        raise DomainError("pair_correlation needs a 2-step distribution")
    n = _check_function_against(P, f, None)
    _check_function_against(P, g, n)
    joint = pair_marginal(P, 1, 2)
    pi1 = joint.sum(axis=1)
    K = np.where(
        pi1[:, None] > 0.0,
        joint / np.where(pi1[:, None] > 0.0, pi1[:, None], 1.0),
        1.0 / P.q,
    )
    tg = _apply_channel(g, K)
    fx = f.values
    if n == 0:
        return float(fx[0] * tg[0])
    w = pi1
    weights = w
    for _ in range(n - 1):
        weights = np.kron(w, weights)
    return float((fx * tg) @ weights)


def _support_arrays(P: StepDistribution):
    nz = np.nonzero(P.table > 0.0)[0]
    m = nz.shape[0]
    digits = np.empty((m, P.steps), dtype=np.int64)
    rem = nz.astype(np.int64)
    for j in range(P.steps):
        digits[:, j] = rem % P.q
        rem = rem // P.q
    return digits, P.table[nz]


def multi_correlation(F, P: StepDistribution) -> float:
    """<F>_P = E[prod_j f_j(X^(j))], exact enumeration over supp(P)^n."""
    F = list(F)
    if len(F) != P.steps:
        raise DomainError(
            f"need one function per step: got {len(F)} for {P.steps} steps"
        )
    n = None
    for f in F:
        n = _check_function_against(P, f, n)
    digits, weights = _support_arrays(P)
    m = digits.shape[0]
    if m**n > EXACT_BUDGET:
        raise BudgetExceededError(
            f"exact enumeration needs {m}^{n} > {EXACT_BUDGET} points; "
            "use multi_correlation_mc"
        )
    tables = np.stack([f.values for f in F])
    return float(
        _kernels.support_product_sum(tables, digits, weights, n, P.q)
    )


def multi_correlation_mc(F, P: StepDistribution, samples: int, seed: int = 0):
    """(estimate, half_width): sample mean of prod_j f_j with 99% half-width."""
    F = list(F)
    if len(F) != P.steps:
        raise DomainError(
            f"need one function per step: got {len(F)} for {P.steps} steps"
        )
    n = None
    for f in F:
        n = _check_function_against(P, f, n)
        if np.max(np.abs(f.values)) > 1.0 + 1e-12:
            raise DomainError("MC path requires values bounded in [-1,1]")
    samples = int(samples)
    if samples < 2:
        raise DomainError("need at least 2 samples")
    qpow = P.q ** np.arange(n, dtype=np.int64)
    n_chunks = (samples + MC_CHUNK - 1) // MC_CHUNK
    rngs = chunk_streams(seed, "multi_correlation_mc", n_chunks)
    total = 0.0
    total_sq = 0.0
    done = 0
    for c in range(n_chunks):
        b = min(MC_CHUNK, samples - done)
        if n == 0:
            vals = np.full(b, float(np.prod([f.values[0] for f in F])))
        else:
            cols = sample(P, b * n, rngs[c]).reshape(P.steps, b, n)
            vals = np.ones(b)
            for j, f in enumerate(F):
                idx = (cols[j] * qpow).sum(axis=1)
                vals *= f.values[idx]
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += b
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    half_width = Z99 * math.sqrt(var / samples)
    return mean, half_width


@dataclass
class SmoothingReport:
    gamma: float
    rho: float
    value: float
    smoothed_value: float
    difference: float
    epsilon: float
    holds: bool


def smoothing_check(F, P: StepDistribution, eps: float) -> SmoothingReport:
    """Verify |<F>_P - <T_{1-gamma} F>_P| <= eps at gamma = (1-rho)eps/(l ln(l/eps)).

    Each f_j is smoothed against its own step marginal.  Raises BoundViolation
    if the asserted inequality fails.
    """
    F = list(F)
    eps = float(eps)
    if not 0.0 < eps <= 0.5:
        raise DomainError("epsilon must lie in (0, 1/2]")
    for f in F:
        if f.values.min() < -1e-12 or f.values.max() > 1.0 + 1e-12:
            raise DomainError("smoothing_check requires [0,1]-valued functions")
    report = rho_max(P)
    if report.rho >= 1.0 - 1e-9:
        raise DegenerateDistributionError(
            f"rho(P) = {report.rho:.12f}; smoothing needs rho < 1"
        )
    l = P.steps
    gamma = (1.0 - report.rho) * eps / (l * math.log(l / eps))
    margs = marginals(P)
    smoothed = [
        noise_operator(f.with_measure(margs[j]), 1.0 - gamma)
        for j, f in enumerate(F)
    ]
    value = multi_correlation(F, P)
    smoothed_value = multi_correlation(smoothed, P)
    difference = abs(value - smoothed_value)
    holds = difference <= eps + 1e-12
    out = SmoothingReport(
        gamma=gamma,
        rho=report.rho,
        value=value,
        smoothed_value=smoothed_value,
        difference=difference,
        epsilon=eps,
        holds=holds,
    )
    if not holds:
        raise BoundViolation(
            f"smoothing difference {difference:.6g} exceeds epsilon {eps:.6g}"
        )
    return out
