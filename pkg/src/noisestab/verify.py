"""Desk-scale verification of the stability statements on concrete functions.

Each check evaluates both sides of one inequality and reports the margin as
the slack of the asserted inequality: margin >= 0 iff the bound holds
(rhs - lhs for upper bounds, lhs - rhs for the social-choice lower bound).
Hypothesis certificates are recorded; a failed hypothesis downgrades the
verdict to hypotheses_not_met while still reporting the raw margin, so
violations by non-resilient functions (the dictator) stay visible.

Thresholds (eps, r, alpha, m, beta) are caller-supplied: the certified
parameter formulas produce astronomically large values, so the inequalities
are checked at desk scale, decoupled from the parameters module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .distributions import StepDistribution, arrow3, gaussian_counterpart, marginals
from .errors import BoundViolation, BudgetExceededError, DomainError
from .fourier import fourier_transform
from .gaussian import GammaEstimate, gamma_estimate, halfspace_stability
from .resilience import cross_resilient, resilience_defect
from .stability import multi_correlation, noisy_inner_product
from .tables import TableFunction
from . import _kernels

VERDICT_HOLDS = "holds"
VERDICT_VIOLATED = "violated"
VERDICT_HYPOTHESES = "hypotheses_not_met"
VERDICT_INCONCLUSIVE = "inconclusive_estimate"

ARROW_ENUM_BUDGET = 10**8


@dataclass
class StabilityReport:
    theorem_id: str
    lhs: float
    rhs: float
    margin: float
    verdict: str
    direction: str = "upper"
    hypotheses: dict = field(default_factory=dict)


def _check_unit_range(f: TableFunction, name: str):
    if f.values.min() < -1e-12 or f.values.max() > 1.0 + 1e-12:
        raise DomainError(f"{name} must take values in [0,1]")


def _check_boolean_uniform(f: TableFunction, name: str):
    if f.q != 2 or not f.is_uniform():
        raise DomainError(f"{name} must live on the Boolean cube with the uniform measure")


def check_theorem_two(f: TableFunction, g: TableFunction, rho: float, eps: float, r: int, alpha: float) -> StabilityReport:
    """Upper bound for two [0,1] functions: <f,g>_rho <= halfspace(mu_f, mu_g, rho) + eps,
    under an (r,alpha)-resilience certificate for f."""
    _check_boolean_uniform(f, "f")
    _check_boolean_uniform(g, "g")
    _check_unit_range(f, "f")
    _check_unit_range(g, "g")
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise DomainError("rho must lie in [0,1]")
    eps = float(eps)
    if eps < 0.0:
        raise DomainError("eps must be nonnegative")
    cert = resilience_defect(f, r, alpha)
    mu_f = f.expectation()
    mu_g = g.expectation()
    lhs = noisy_inner_product(f, g, rho)
    bound = halfspace_stability(mu_f, mu_g, rho)
    rhs = bound + eps
    margin = rhs - lhs
    if not cert.passed:
        verdict = VERDICT_HYPOTHESES
    else:
        verdict = VERDICT_HOLDS if margin >= 0.0 else VERDICT_VIOLATED
    return StabilityReport(
        theorem_id="two",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=verdict,
        hypotheses={
            "resilience": cert,
            "r": int(r),
            "alpha": float(alpha),
            "rho": rho,
            "eps": eps,
            "mu_f": mu_f,
            "mu_g": mu_g,
            "halfspace_value": bound,
        },
    )


def pair_lower_bound_value(mu_f: float, mu_g: float, rho: float) -> float:
    """Lower-bound counterpart of the half-space value: mass of f's half-space
    minus its overlap with the complement half-space of mass 1 - mu_g.  Equals
    the quadrant probability at correlation -rho."""
    return mu_f - halfspace_stability(mu_f, 1.0 - mu_g, rho)


def check_pair_lower(f: TableFunction, g: TableFunction, rho: float, eps: float, r: int, alpha: float) -> StabilityReport:
    """Mirrored lower bound: <f,g>_rho >= pair_lower_bound_value - eps under the
    same resilience hypothesis on f; margin = lhs - rhs."""
    _check_boolean_uniform(f, "f")
    _check_boolean_uniform(g, "g")
    _check_unit_range(f, "f")
    _check_unit_range(g, "g")
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise DomainError("rho must lie in [0,1]")
    cert = resilience_defect(f, r, alpha)
    mu_f = f.expectation()
    mu_g = g.expectation()
    lhs = noisy_inner_product(f, g, rho)
    bound = pair_lower_bound_value(mu_f, mu_g, rho)
    rhs = bound - float(eps)
    margin = lhs - rhs
    if not cert.passed:
        verdict = VERDICT_HYPOTHESES
    else:
        verdict = VERDICT_HOLDS if margin >= 0.0 else VERDICT_VIOLATED
    return StabilityReport(
        theorem_id="two-lower",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=verdict,
        direction="lower",
        hypotheses={
            "resilience": cert,
            "r": int(r),
            "alpha": float(alpha),
            "rho": rho,
            "eps": float(eps),
            "mu_f": mu_f,
            "mu_g": mu_g,
            "lower_value": bound,
        },
    )


def check_theorem_multi(F, P: StepDistribution, eps: float, r: int, samples: int = 200_000, seed: int = 0) -> StabilityReport:
    """Multi-function upper bound: <F>_P <= Gamma-estimate(mu) + eps, each f_j
    certified (r, eps/(4 l))-resilient under its step marginal.

    The Gaussian side is a lower estimate of the true supremum, so the verdict
    is holds only when lhs <= estimate + eps - half_width; a larger lhs is
    inconclusive_estimate, never violated.
    """
    F = list(F)
    if len(F) != P.steps:
        raise DomainError(f"need {P.steps} functions, got {len(F)}")
    for j, f in enumerate(F):
        _check_unit_range(f, f"f{j + 1}")
    eps = float(eps)
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    l = P.steps
    alpha_req = eps / (4.0 * l)
    margs = marginals(P)
    certs = [
        resilience_defect(f.with_measure(margs[j]), r, alpha_req)
        for j, f in enumerate(F)
    ]
    mu = [f.with_measure(margs[j]).expectation() for j, f in enumerate(F)]
    lhs = multi_correlation(F, P)
    G = gaussian_counterpart(P)
    est: GammaEstimate = gamma_estimate(mu, G, samples=samples, seed=seed)
    rhs = est.value + eps
    margin = rhs - lhs
    if not all(c.passed for c in certs):
        verdict = VERDICT_HYPOTHESES
    elif lhs <= est.value + eps - est.half_width:
        verdict = VERDICT_HOLDS
    else:
        verdict = VERDICT_INCONCLUSIVE
    return StabilityReport(
        theorem_id="multi",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=verdict,
        hypotheses={
            "resilience": certs,
            "r": int(r),
            "alpha_required": alpha_req,
            "eps": eps,
            "mu": tuple(mu),
            "estimate": est,
        },
    )


def _coefficient_witness(f: TableFunction, g: TableFunction, m: int, beta: float):
    """First (size-then-lex) pair S, T with |fhat(S)|, |ghat(T)| > beta,
    |S|,|T| <= m, and S intersecting T."""
    fh = fourier_transform(f).coefficients
    gh = fourier_transform(g).coefficients
    mmax = min(int(m), f.n)

    def heavy(coeffs):
        out = []
        for size in range(1, mmax + 1):
            for combo in combinations(range(f.n), size):
                mask = 0
                for c in combo:
                    mask |= 1 << c
                if abs(float(coeffs[mask])) > beta:
                    out.append((combo, mask, float(coeffs[mask])))
        return out

    for combo_s, mask_s, coef_s in heavy(fh):
        for combo_t, mask_t, coef_t in heavy(gh):
            if mask_s & mask_t:
                return {
                    "S": tuple(c + 1 for c in combo_s),
                    "T": tuple(c + 1 for c in combo_t),
                    "coefficient_f": coef_s,
                    "coefficient_g": coef_t,
                }
    return None


def check_theorem_three(f: TableFunction, g: TableFunction, rho: float, eps: float, m: int, beta: float) -> StabilityReport:
    """Cross-resilience upper bound: same inequality as the two-function check,
    with hypothesis cross_resilient(f, g, m, beta).  A negative margin emits a
    contrapositive witness: intersecting heavy sets S, T with coefficients
    above beta."""
    _check_boolean_uniform(f, "f")
    _check_boolean_uniform(g, "g")
    _check_unit_range(f, "f")
    _check_unit_range(g, "g")
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise DomainError("rho must lie in [0,1]")
    cross = cross_resilient(f, g, m, beta)
    mu_f = f.expectation()
    mu_g = g.expectation()
    lhs = noisy_inner_product(f, g, rho)
    bound = halfspace_stability(mu_f, mu_g, rho)
    rhs = bound + float(eps)
    margin = rhs - lhs
    witness = _coefficient_witness(f, g, m, beta) if margin < 0.0 else None
    if not cross.passed:
        verdict = VERDICT_HYPOTHESES
    else:
        verdict = VERDICT_HOLDS if margin >= 0.0 else VERDICT_VIOLATED
    return StabilityReport(
        theorem_id="three",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=verdict,
        hypotheses={
            "cross_resilience": cross,
            "m": int(m),
            "beta": float(beta),
            "rho": rho,
            "eps": float(eps),
            "mu_f": mu_f,
            "mu_g": mu_g,
            "halfspace_value": bound,
            "witness": witness,
        },
    )


# -- social choice ---------------------------------------------------------


def _vote_convention(fs) -> str:
    values = np.concatenate([f.values for f in fs])
    if np.all(np.isin(values, (0.0, 1.0))):
        return "zero_one"
    if np.all(np.isin(values, (-1.0, 1.0))):
        return "pm_one"
    raise DomainError("vote functions must all be {0,1}- or all {-1,+1}-valued")


def paradox_probability(f: TableFunction, g: TableFunction, h: TableFunction) -> float:
    """P[f(X) = g(Y) = h(Z)] for votes drawn per coordinate from the
    not-all-equal triple distribution.

    Computed two ways whenever the 6^n enumeration fits the budget: direct
    support enumeration, and the exact pairwise identity through inner
    products at correlation -1/3 (each pair of vote columns has E[xy] = -1/3).
    The two must agree to 1e-10.
    """
    for name, fn in (("f", f), ("g", g), ("h", h)):
        _check_boolean_uniform(fn, name)
    if not f.n == g.n == h.n:
        raise DomainError("vote functions must share one arity")
    convention = _vote_convention([f, g, h])
    p12 = noisy_inner_product(f, g, -1.0 / 3.0)
    p23 = noisy_inner_product(g, h, -1.0 / 3.0)
    p13 = noisy_inner_product(f, h, -1.0 / 3.0)
    if convention == "zero_one":
        # pointwise on {0,1}: 1(a=b=c) = 1 - (a+b+c) + (ab+bc+ca)
        identity_value = (
            1.0
            - (f.expectation() + g.expectation() + h.expectation())
            + (p12 + p23 + p13)
        )
    else:
        # pointwise on {-1,1}: 1(a=b=c) = (1 + ab + bc + ca)/4
        identity_value = (1.0 + p12 + p23 + p13) / 4.0
    P = arrow3()
    if 6**f.n <= ARROW_ENUM_BUDGET:
        nz = np.nonzero(P.table > 0.0)[0]
        digits = np.empty((nz.shape[0], 3), dtype=np.int64)
        rem = nz.astype(np.int64)
        for j in range(3):
            digits[:, j] = rem % 2
            rem //= 2
        tables = np.stack([f.values, g.values, h.values])
        direct = float(
            _kernels.support_equality_mass(tables, digits, P.table[nz], f.n, 2)
        )
        if abs(direct - identity_value) > 1e-10:
            raise BoundViolation(
                f"paradox identity mismatch: enumeration {direct!r} vs "
                f"identity {identity_value!r}"
            )
        return direct
    return identity_value


def guilbaud_constant() -> float:
    """3 <chi_half, 1 - chi_half>_{1/3} - 1/2, via quadrature."""
    overlap = halfspace_stability(0.5, 0.5, 1.0 / 3.0)
    return 3.0 * (0.5 - overlap) - 0.5


def check_arrow(f: TableFunction, g: TableFunction, h: TableFunction, eps: float, m: int, beta: float) -> StabilityReport:
    """Lower bound on the paradox probability for balanced +-1 votes:
    P[f = g = h] >= guilbaud_constant() - eps under pairwise (m,beta)
    cross-resilience; margin = lhs - rhs."""
    for name, fn in (("f", f), ("g", g), ("h", h)):
        _check_boolean_uniform(fn, name)
    eps = float(eps)
    if eps < 0.0:
        raise DomainError("eps must be nonnegative")
    convention = _vote_convention([f, g, h])
    means = (f.expectation(), g.expectation(), h.expectation())
    balanced = convention == "pm_one" and all(abs(mu) <= 1e-12 for mu in means)
    crosses = {
        "fg": cross_resilient(f, g, m, beta),
        "gh": cross_resilient(g, h, m, beta),
        "fh": cross_resilient(f, h, m, beta),
    }
    lhs = paradox_probability(f, g, h)
    bound = guilbaud_constant()
    rhs = bound - eps
    margin = lhs - rhs
    if not balanced or not all(c.passed for c in crosses.values()):
        verdict = VERDICT_HYPOTHESES
    else:
        verdict = VERDICT_HOLDS if margin >= 0.0 else VERDICT_VIOLATED
    return StabilityReport(
        theorem_id="arrow",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=verdict,
        direction="lower",
        hypotheses={
            "balanced": balanced,
            "means": means,
            "cross_resilience": crosses,
            "m": int(m),
            "beta": float(beta),
            "eps": eps,
            "guilbaud": bound,
        },
    )
