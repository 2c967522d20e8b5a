"""Evaluators for the explicit parameter formulas of the main statements.

The absolute constants hidden in O(.)/Omega(.) are surfaced as a
ConstantsProfile (all default 1).  Values here grow astronomically for small
epsilon; integer outputs overflow to math.inf explicitly, and the thresholds
alpha, beta can underflow to 0.0.  Callers treat these as certificate
parameters, not tight numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ConstantsProfile:
    C_tau: float = 1.0
    C_r: float = 1.0
    C_alpha: float = 1.0
    C_m: float = 1.0
    C_beta: float = 1.0

    def __post_init__(self):
        for name in ("C_tau", "C_r", "C_alpha", "C_m", "C_beta"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")


DEFAULT_PROFILE = ConstantsProfile()


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps <= 0.5:
        raise DomainError(f"epsilon must lie in (0, 1/2], got {eps}")
    return eps


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0,1), got {rho}")
    return rho


def tau_mist(eps: float, rho: float, profile: ConstantsProfile = DEFAULT_PROFILE) -> float:
    """eps^(C_tau log(1/eps) log(1/(1-rho)) / ((1-rho) eps)).

    At rho = 0 the exponent is 0 and the formula gives exactly 1.0; the value
    is strictly inside (0,1) only for rho > 0.
    """
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    exponent = (
        profile.C_tau
        * math.log(1.0 / eps)
        * math.log(1.0 / (1.0 - rho))
        / ((1.0 - rho) * eps)
    )
    return eps**exponent


def tau_general(
    eps: float,
    rho: float,
    pi_star: float,
    l: int,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> float:
    """((1-rho^2) eps / l^(5/2))^(C_tau l ln(l/eps) ln(1/pi_star) / ((1-rho) eps))."""
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    pi_star = float(pi_star)
    if not 0.0 < pi_star <= 1.0:
        raise DomainError("pi_star must lie in (0,1]")
    l = int(l)
    if l < 2:
        raise DomainError("need at least 2 steps")
    base = (1.0 - rho * rho) * eps / l**2.5
    exponent = (
        profile.C_tau
        * l
        * math.log(l / eps)
        * math.log(1.0 / pi_star)
        / ((1.0 - rho) * eps)
    )
    return base**exponent


def tau_two_general(
    eps: float,
    rho: float,
    mu: float,
    profile: ConstantsProfile = DEFAULT_PROFILE,
) -> float:
    """Two-step general-domain variant: eps^(C ln(1/mu) ln(1/eps) ln(1/(1-rho)) / ((1-rho) eps)),
    mu the minimal atom weight."""
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    mu = float(mu)
    if not 0.0 < mu <= 1.0:
        raise DomainError("mu must lie in (0,1]")
    exponent = (
        profile.C_tau
        * math.log(1.0 / mu)
        * math.log(1.0 / eps)
        * math.log(1.0 / (1.0 - rho))
        / ((1.0 - rho) * eps)
    )
    return eps**exponent


def _ceil_or_inf(x: float):
    if not math.isfinite(x):
        return math.inf
    return int(math.ceil(x))


def r_alpha_two(eps: float, rho: float, profile: ConstantsProfile = DEFAULT_PROFILE):
    """(r, alpha) for the two-function Boolean statement.

    r = ceil(C_r / (eps^2 (1-rho) tau)) with tau = tau_mist(eps, rho);
    alpha = C_alpha eps 2^-r.  r overflows to inf (then alpha underflows to 0).
    """
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    tau = tau_mist(eps, rho, profile)
    if tau == 0.0:  # underflowed threshold: the certified r is past float range
        return math.inf, 0.0
    r = _ceil_or_inf(profile.C_r / (eps * eps * (1.0 - rho) * tau))
    if not math.isfinite(r):
        return math.inf, 0.0
    alpha = profile.C_alpha * eps * 2.0 ** float(-r)
    return r, alpha


def r_multi(
    eps: float,
    rho: float,
    l: int,
    pi_star: float | None = None,
    profile: ConstantsProfile = DEFAULT_PROFILE,
    tau: float | None = None,
):
    """r = ceil(C_r 4 l^2 ln(l/eps) / (tau (1-rho) eps^2)); tau defaults to
    tau_general(eps, rho, pi_star, l)."""
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    l = int(l)
    if l < 2:
        raise DomainError("need at least 2 steps")
    if tau is None:
        if pi_star is None:
            raise DomainError("supply pi_star or tau")
        tau = tau_general(eps, rho, pi_star, l, profile)
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise DomainError("tau must lie in [0,1]")
    if tau == 0.0:  # underflowed threshold
        return math.inf
    return _ceil_or_inf(
        profile.C_r * 4.0 * l * l * math.log(l / eps) / (tau * (1.0 - rho) * eps * eps)
    )


def m_beta_three(
    eps: float,
    rho: float,
    pi_star: float,
    profile: ConstantsProfile = DEFAULT_PROFILE,
):
    """(m, beta) for the three-function statement, chained through r_alpha_two.

    m = ceil(C_m r / (eps alpha^2)), beta = C_beta pi_star^m 2^-m eps, with
    (r, alpha) exactly as r_alpha_two under the same profile.
    """
    eps = _check_eps(eps)
    rho = _check_rho(rho)
    pi_star = float(pi_star)
    if not 0.0 < pi_star <= 1.0:
        raise DomainError("pi_star must lie in (0,1]")
    r, alpha = r_alpha_two(eps, rho, profile)
    if not math.isfinite(r) or alpha == 0.0:
        return math.inf, 0.0
    m = _ceil_or_inf(profile.C_m * r / (eps * alpha * alpha))
    if not math.isfinite(m):
        return math.inf, 0.0
    beta = profile.C_beta * pi_star ** float(m) * 2.0 ** float(-m) * eps
    return m, beta


def depth_influence(total_influence: float, tau: float, eps: float):
    """2 + ceil(I/(tau eps)): single-function influence tree cap."""
    if tau <= 0.0 or eps <= 0.0:
        raise DomainError("tau and eps must be positive")
    if total_influence <= 0.0:
        return 2
    v = _ceil_or_inf(total_influence / (tau * eps))
    return v if not math.isfinite(v) else 2 + v


def depth_correlated(total_influence: float, tau: float, eps: float):
    """4 + ceil(I(F)/(tau eps)): correlated-tree cap."""
    if tau <= 0.0 or eps <= 0.0:
        raise DomainError("tau and eps must be positive")
    if total_influence <= 0.0:
        return 4
    v = _ceil_or_inf(total_influence / (tau * eps))
    return v if not math.isfinite(v) else 4 + v


def depth_fourier(r: int, alpha: float, eps: float):
    """r (1 + ceil(1/(alpha^2 eps))): variance-witness tree cap.

    alpha == 0 (an underflowed certified value) gives an unbounded cap.
    """
    r = int(r)
    if r < 1:
        raise DomainError("r must be >= 1")
    if alpha < 0.0 or eps <= 0.0:
        raise DomainError("alpha must be nonnegative, eps positive")
    if alpha == 0.0:
        return math.inf
    v = _ceil_or_inf(1.0 / (alpha * alpha * eps))
    return v if not math.isfinite(v) else r * (1 + v)


def depth_bounds(kind: str, **kw):
    """Dispatch to the three depth formulas by kind: influence | correlated | fourier."""
    if kind == "influence":
        return depth_influence(kw["total_influence"], kw["tau"], kw["eps"])
    if kind == "correlated":
        return depth_correlated(kw["total_influence"], kw["tau"], kw["eps"])
    if kind == "fourier":
        return depth_fourier(kw["r"], kw["alpha"], kw["eps"])
    raise DomainError(f"unknown tree kind {kind!r}")
