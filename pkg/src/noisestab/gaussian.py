"""Gaussian half-space stability, Borell-type bounds, and the product-mass
lower estimator over correlated Gaussian blocks.

Quadrature domains are truncated at +-8.3 standard deviations; the discarded
tail mass is below double-precision resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from .distributions import GaussianCounterpart, sample_gaussian
from .errors import BoundViolation, DomainError
from .rng import chunk_streams

Z99 = 2.5758293035489004
TAIL_CUT = 8.3
MC_CHUNK = 1 << 16


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to ~1e-15 absolute (erf-based)."""
    return float(ndtr(x))


def normal_quantile(mu: float) -> float:
    """Inverse standard normal CDF; mu=0 -> -inf and mu=1 -> +inf sentinels."""
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"quantile argument must lie in [0,1], got {mu}")
    if mu == 0.0:
        return -math.inf
    if mu == 1.0:
        return math.inf
    return float(ndtri(mu))


def _phi(t: float) -> float:
    return math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def arcsine_quadrant(rho: float) -> float:
    """Closed form for mu1 = mu2 = 1/2: 1/4 + arcsin(rho)/(2 pi)."""
    if not -1.0 <= rho <= 1.0:
        raise DomainError("correlation must lie in [-1,1]")
    return 0.25 + math.asin(rho) / (2.0 * math.pi)


@dataclass
class HalfspaceQuery:
    mu1: float
    mu2: float
    rho: float


def halfspace_stability(mu1, mu2=None, rho=None) -> float:
    """P[N <= quantile(mu1), M <= quantile(mu2)] for correlation rho.

    Accepts either a HalfspaceQuery or the three scalars.  Exact limits at
    mu in {0,1} and rho in {-1,0,1}; everything else goes through adaptive
    1-D quadrature (absolute accuracy 1e-10), including mu = 1/2, so the
    arcsine closed form stays an independent cross-check.
    """
    if isinstance(mu1, HalfspaceQuery):
        q = mu1
        mu1, mu2, rho = q.mu1, q.mu2, q.rho
    mu1 = float(mu1)
    mu2 = float(mu2)
    rho = float(rho)
    if not 0.0 <= mu1 <= 1.0 or not 0.0 <= mu2 <= 1.0:
        raise DomainError("masses must lie in [0,1]")
    if not -1.0 <= rho <= 1.0:
        raise DomainError("correlation must lie in [-1,1]")
    if mu1 == 0.0 or mu2 == 0.0:
        return 0.0
    if mu1 == 1.0:
        return mu2
    if mu2 == 1.0:
        return mu1
    if rho == 0.0:
        return mu1 * mu2
    if rho == 1.0:
        return min(mu1, mu2)
    if rho == -1.0:
        return max(mu1 + mu2 - 1.0, 0.0)
    a = normal_quantile(mu1)
    b = normal_quantile(mu2)
    denom = math.sqrt(1.0 - rho * rho)

    def integrand(t: float) -> float:
        return _phi(t) * float(ndtr((b - rho * t) / denom))

    hi = min(a, TAIL_CUT)
    if hi <= -TAIL_CUT:
        return 0.0
    val, _ = integrate.quad(
        integrand, -TAIL_CUT, hi, epsabs=1e-12, epsrel=1e-12, limit=200
    )
    return float(min(max(val, 0.0), min(mu1, mu2)))


@dataclass
class ContinuityReport:
    rho_shift_lhs: float
    rho_shift_rhs: float
    mu_shift_lhs: float
    mu_shift_rhs: float
    holds: bool


def continuity_bound_check(mu1, mu2, rho1, rho2, mu1p, mu2p) -> ContinuityReport:
    """Standard continuity estimates for the quadrant probability.

    Correlation shift: |Q(rho1) - Q(rho2)| <= 10 (rho2 - rho1)/(1 - rho2).
    Mass shift: |Q(mu) - Q(mu')| <= 2|mu1 - mu1'| + 2|mu2 - mu2'|, checked at
    both correlations.  Raises BoundViolation if either inequality fails.
    """
    rho1 = float(rho1)
    rho2 = float(rho2)
    if not rho1 <= rho2 < 1.0:
        raise DomainError("need rho1 <= rho2 < 1")
    v1 = halfspace_stability(mu1, mu2, rho1)
    v2 = halfspace_stability(mu1, mu2, rho2)
    rho_lhs = abs(v1 - v2)
    rho_rhs = 10.0 * (rho2 - rho1) / (1.0 - rho2)
    mu_lhs = max(
        abs(v1 - halfspace_stability(mu1p, mu2p, rho1)),
        abs(v2 - halfspace_stability(mu1p, mu2p, rho2)),
    )
    mu_rhs = 2.0 * abs(float(mu1) - float(mu1p)) + 2.0 * abs(float(mu2) - float(mu2p))
    holds = rho_lhs <= rho_rhs + 1e-10 and mu_lhs <= mu_rhs + 1e-10
    report = ContinuityReport(rho_lhs, rho_rhs, mu_lhs, mu_rhs, holds)
    if not holds:
        raise BoundViolation(f"continuity estimate failed: {report}")
    return report


# -- piecewise-constant Gaussian test functions ----------------------------


@dataclass
class PiecewiseConstant:
    """Right-continuous step function on R: values[i] on (thresholds[i-1], thresholds[i]].

    thresholds has length k, strictly increasing; values has length k+1 with
    values[k] on (thresholds[k-1], inf).
    """

    thresholds: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.thresholds = np.asarray(self.thresholds, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape[0] != self.thresholds.shape[0] + 1:
            raise DomainError("need one more value than thresholds")
        if self.thresholds.shape[0] and np.any(np.diff(self.thresholds) <= 0):
            raise DomainError("thresholds must be strictly increasing")

    def __call__(self, t: float) -> float:
        return float(self.values[int(np.searchsorted(self.thresholds, t))])

    def gaussian_mean(self) -> float:
        cuts = np.concatenate(([-np.inf], self.thresholds, [np.inf]))
        masses = np.diff(ndtr(cuts))
        return float(self.values @ masses)


def chi_mu(mu: float) -> PiecewiseConstant:
    """Indicator of (-inf, quantile(mu)] with Gaussian mass mu."""
    mu = float(mu)
    if mu <= 0.0:
        return PiecewiseConstant(np.array([]), np.array([0.0]))
    if mu >= 1.0:
        return PiecewiseConstant(np.array([]), np.array([1.0]))
    return PiecewiseConstant(np.array([normal_quantile(mu)]), np.array([1.0, 0.0]))


def indicator_interval(a: float, b: float) -> PiecewiseConstant:
    if not a < b:
        raise DomainError("need a < b")
    return PiecewiseConstant(np.array([a, b]), np.array([0.0, 1.0, 0.0]))


def borell_bound(mu_phi: float, mu_psi: float, rho: float) -> float:
    """Half-space value: the maximum of <phi,psi>_rho over given masses, rho >= 0."""
    if float(rho) < 0.0:
        raise DomainError("negative correlation is unsupported here")
    return halfspace_stability(mu_phi, mu_psi, rho)


@dataclass
class BorellReport:
    value: float
    bound: float
    mu_phi: float
    mu_psi: float
    rho: float
    holds: bool


def _biv_density(x: float, y: float, rho: float) -> float:
    d = 1.0 - rho * rho
    expo = -(x * x - 2.0 * rho * x * y + y * y) / (2.0 * d)
    return math.exp(expo) / (2.0 * math.pi * math.sqrt(d))


def borell_check(phi: PiecewiseConstant, psi: PiecewiseConstant, rho: float) -> BorellReport:
    """2-D quadrature of <phi,psi>_rho against the half-space bound.

    Integrates the bivariate density cell by cell over the rectangle grid of
    the two step functions (smooth integrand per cell).  Raises BoundViolation
    if the value exceeds bound + 1e-8.
    """
    rho = float(rho)
    if rho < 0.0:
        raise DomainError("negative correlation is unsupported here")
    if phi.values.min() < 0.0 or phi.values.max() > 1.0:
        raise DomainError("phi must take values in [0,1]")
    if psi.values.min() < 0.0 or psi.values.max() > 1.0:
        raise DomainError("psi must take values in [0,1]")
    if rho == 1.0:
        val, _ = integrate.quad(
            lambda t: phi(t) * psi(t) * _phi(t),
            -TAIL_CUT,
            TAIL_CUT,
            epsabs=1e-11,
            epsrel=1e-11,
            limit=400,
            points=list(np.concatenate((phi.thresholds, psi.thresholds))),
        )
        value = float(val)
    else:
        xs = np.concatenate(([-TAIL_CUT], np.clip(phi.thresholds, -TAIL_CUT, TAIL_CUT), [TAIL_CUT]))
        ys = np.concatenate(([-TAIL_CUT], np.clip(psi.thresholds, -TAIL_CUT, TAIL_CUT), [TAIL_CUT]))
        xs = np.unique(xs)
        ys = np.unique(ys)
        value = 0.0
        for ix in range(xs.shape[0] - 1):
            xm = 0.5 * (xs[ix] + xs[ix + 1])
            pv = phi(xm)
            if pv == 0.0:
                continue
            for iy in range(ys.shape[0] - 1):
                ym = 0.5 * (ys[iy] + ys[iy + 1])
                qv = psi(ym)
                if qv == 0.0:
                    continue
                cell, _ = integrate.dblquad(
                    lambda y, x: _biv_density(x, y, rho),
                    xs[ix],
                    xs[ix + 1],
                    ys[iy],
                    ys[iy + 1],
                    epsabs=1e-10,
                    epsrel=1e-10,
                )
                value += pv * qv * cell
    mu_phi = phi.gaussian_mean()
    mu_psi = psi.gaussian_mean()
    bound = borell_bound(mu_phi, mu_psi, rho)
    holds = value <= bound + 1e-8
    report = BorellReport(float(value), bound, mu_phi, mu_psi, rho, holds)
    if not holds:
        raise BoundViolation(f"inner product exceeds half-space bound: {report}")
    return report


# -- lower estimator for the best product mass -----------------------------


@dataclass
class GammaEstimate:
    mu: tuple
    value: float
    strategy: str
    samples: int
    half_width: float
    label: str = field(default="lower-estimate")


def gamma_estimate(mu, G: GaussianCounterpart, samples: int = 200_000, seed: int = 0) -> GammaEstimate:
    """Lower estimate of the best E[prod_j phi_j] over half-space families.

    Each step j gets the indicator of a half-space in its own Gaussian block,
    thresholded so its mass is exactly mu_j: the direction is the top left
    singular vector of the block's cross-covariance with the other steps
    (sign-aligned to the first step), the threshold the mu_j-quantile of the
    projected variance.  This is one admissible family, so the MC mean is an
    explicit lower estimate of the supremum, never an exact value.

    Steps with mu_j = 1 are dropped; mu_j = 0 gives 0; steps whose block is
    deterministic or uncorrelated with the rest factor out as mu_j.
    """
    mu = [float(m) for m in mu]
    if G.steps and len(mu) != G.steps:
        raise DomainError(f"need {G.steps} masses, got {len(mu)}")
    for m in mu:
        if not 0.0 <= m <= 1.0:
            raise DomainError("masses must lie in [0,1]")
    strategy = "halfspace-family"
    if any(m == 0.0 for m in mu):
        return GammaEstimate(tuple(mu), 0.0, strategy, 0, 0.0)
    l = G.steps
    q = G.q
    cov = G.covariance
    blocks = [slice(j * q, (j + 1) * q) for j in range(l)]
    active = [j for j in range(l) if mu[j] < 1.0]
    const_factor = 1.0
    directions: dict[int, np.ndarray] = {}
    scales: dict[int, float] = {}
    for j in list(active):
        others = [k for k in active if k != j]
        if not others:
            const_factor *= mu[j]
            active.remove(j)
            continue
        cols = np.concatenate([np.arange(b.start, b.stop) for b in (blocks[k] for k in others)])
        cross = cov[blocks[j]][:, cols]
        block = cov[blocks[j], blocks[j]]
        if np.max(np.abs(block)) < 1e-14:
            const_factor *= mu[j]
            active.remove(j)
            continue
        if np.max(np.abs(cross)) < 1e-14:
            u = np.linalg.eigh(block)[1][:, -1]
        else:
            u = np.linalg.svd(cross, full_matrices=False)[0][:, 0]
        s = math.sqrt(max(float(u @ block @ u), 0.0))
        if s < 1e-12:
            const_factor *= mu[j]
            active.remove(j)
            continue
        directions[j] = u
        scales[j] = s
    if len(active) <= 1:
        for j in active:
            const_factor *= mu[j]
        return GammaEstimate(tuple(mu), min(max(const_factor, 0.0), 1.0), strategy, 0, 0.0)
    if all(
        np.max(np.abs(cov[blocks[a], blocks[b]])) < 1e-14
        for ia, a in enumerate(active)
        for b in active[ia + 1 :]
    ):
        # jointly Gaussian with zero cross-covariance: blocks independent
        value = const_factor
        for j in active:
            value *= mu[j]
        return GammaEstimate(tuple(mu), min(max(value, 0.0), 1.0), strategy, 0, 0.0)
    j0 = active[0]
    for j in active[1:]:
        if float(directions[j0] @ cov[blocks[j0], blocks[j]] @ directions[j]) < 0.0:
            directions[j] = -directions[j]
    thresholds = {j: scales[j] * normal_quantile(mu[j]) for j in active}
    samples = int(samples)
    if samples < 2:
        raise DomainError("need at least 2 samples")
    n_chunks = (samples + MC_CHUNK - 1) // MC_CHUNK
    rngs = chunk_streams(seed, "gamma_estimate", n_chunks)
    total = 0.0
    total_sq = 0.0
    done = 0
    for c in range(n_chunks):
        b = min(MC_CHUNK, samples - done)
        Z = sample_gaussian(G, b, rngs[c])
        ind = np.ones(b, dtype=bool)
        for j in active:
            proj = directions[j] @ (Z[blocks[j]] - G.mean[blocks[j], None])
            ind &= proj <= thresholds[j]
        vals = ind.astype(np.float64)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += b
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    hw = const_factor * Z99 * math.sqrt(var / samples)
    value = min(max(const_factor * mean, 0.0), 1.0)
    return GammaEstimate(tuple(mu), value, strategy, samples, hw)
