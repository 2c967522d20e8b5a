import math

import pytest

from noisestab import (
    ConstantsProfile,
    DomainError,
    depth_bounds,
    m_beta_three,
    r_alpha_two,
    r_multi,
    tau_general,
    tau_mist,
    tau_two_general,
)
from noisestab.parameters import depth_correlated, depth_fourier, depth_influence

# reference values below were frozen from 50-digit evaluations of the closed
# forms; double arithmetic agrees to ~1e-14 relative


def test_tau_mist_values():
    assert tau_mist(0.1, 0.0) == 1.0
    assert tau_mist(0.5, 0.0) == 1.0
    v = tau_mist(0.1, 0.5)
    assert v == pytest.approx(1.2005843996127643e-32, rel=1e-11)
    assert 0.0 < v < 1.0


def test_tau_mist_monotone_in_rho():
    prev = 1.0
    for rho in (0.1, 0.3, 0.5, 0.7, 0.9):
        v = tau_mist(0.1, rho)
        assert v < prev
        prev = v


def test_tau_general_value():
    v = tau_general(0.1, 0.5, 0.5, 2)
    assert v == pytest.approx(1.1349015115054339e-156, rel=1e-11)


def test_tau_two_general_value():
    v = tau_two_general(0.1, 0.5, 0.25)
    assert v == pytest.approx(5.6058579756217664e-45, rel=1e-11)


def test_r_alpha_two_exact_at_rho_zero():
    r, alpha = r_alpha_two(0.5, 0.0)
    assert r == 4
    assert alpha == 0.03125


def test_r_alpha_two_overflow():
    r, alpha = r_alpha_two(0.01, 0.9)
    assert r == math.inf
    assert alpha == 0.0
    # finite r whose alpha underflows is also well defined
    r2, alpha2 = r_alpha_two(0.1, 0.5)
    assert math.isfinite(r2) and r2 > 1e30
    assert alpha2 == 0.0


def test_r_multi_with_explicit_tau():
    assert r_multi(0.5, 0.0, 2, tau=1.0) == 89
    with pytest.raises(DomainError):
        r_multi(0.5, 0.0, 2)
    with pytest.raises(DomainError):
        r_multi(0.5, 0.0, 2, tau=1.5)
    with pytest.raises(DomainError):
        r_multi(0.5, 0.0, 1, tau=1.0)


def test_m_beta_three_values():
    m, beta = m_beta_three(0.5, 0.0, 0.5)
    assert m == 8192
    assert beta == 0.0  # pi_star^m 2^-m underflows
    m2, beta2 = m_beta_three(0.01, 0.9, 0.5)
    assert m2 == math.inf and beta2 == 0.0


def test_constants_profile_scales():
    strong = ConstantsProfile(C_tau=2.0)
    assert tau_mist(0.1, 0.5, strong) == pytest.approx(
        tau_mist(0.1, 0.5) ** 2, rel=1e-9
    )
    with pytest.raises(DomainError):
        ConstantsProfile(C_r=0.0)
    with pytest.raises(DomainError):
        ConstantsProfile(C_beta=-1.0)


def test_domain_validation():
    with pytest.raises(DomainError):
        tau_mist(0.0, 0.5)
    with pytest.raises(DomainError):
        tau_mist(0.6, 0.5)
    with pytest.raises(DomainError):
        tau_mist(0.1, 1.0)
    with pytest.raises(DomainError):
        tau_general(0.1, 0.5, 0.0, 2)
    with pytest.raises(DomainError):
        tau_two_general(0.1, 0.5, 1.5)
    with pytest.raises(DomainError):
        m_beta_three(0.1, 0.5, 0.0)


def test_depth_formulas():
    assert depth_influence(1.5, 0.5, 0.3) == 2 + math.ceil(1.5 / 0.15)
    assert depth_influence(0.0, 0.5, 0.3) == 2
    assert depth_correlated(1.5, 0.5, 0.3) == 4 + math.ceil(1.5 / 0.15)
    assert depth_correlated(0.0, 0.5, 0.3) == 4
    assert depth_fourier(2, 0.3, 0.5) == 2 * (1 + math.ceil(1.0 / (0.09 * 0.5)))
    assert depth_fourier(2, 0.0, 0.5) == math.inf
    with pytest.raises(DomainError):
        depth_influence(1.0, 0.0, 0.1)
    with pytest.raises(DomainError):
        depth_fourier(0, 0.3, 0.5)
    with pytest.raises(DomainError):
        depth_fourier(1, -0.1, 0.5)


def test_depth_dispatch():
    assert depth_bounds("influence", total_influence=1.5, tau=0.5, eps=0.3) == \
        depth_influence(1.5, 0.5, 0.3)
    assert depth_bounds("correlated", total_influence=1.5, tau=0.5, eps=0.3) == \
        depth_correlated(1.5, 0.5, 0.3)
    assert depth_bounds("fourier", r=2, alpha=0.3, eps=0.5) == \
        depth_fourier(2, 0.3, 0.5)
    with pytest.raises(DomainError):
        depth_bounds("unknown")
