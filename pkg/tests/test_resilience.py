import numpy as np
import pytest

from noisestab import (
    BudgetExceededError,
    DomainError,
    FourierExpansion,
    TableFunction,
    cross_resilient,
    fourier_support,
    fourier_transform,
    inverse_fourier,
    resilience_defect,
    resilience_implies_variance,
    sufficient_condition_check,
    support_cost,
)
from noisestab import resilience as res_mod
from noisestab.families import dictator, dictator_times_majority, majority
from noisestab.fourier import efron_stein
from noisestab.tables import to_unit_interval

from conftest import random_function, random_measure


def test_support_cost_formula():
    # sum_{k<=r} C(n,k) q^k q^(n-k) = q^n sum C(n,k)
    assert support_cost(3, 2, 0) == 8
    assert support_cost(3, 2, 1) == 8 * (1 + 3)
    assert support_cost(3, 3, 2) == 27 * (1 + 3 + 3)
    assert support_cost(30, 2, 5) > res_mod.COST_LIMIT


def test_budget_guard(monkeypatch, rng):
    f = random_function(rng, 2, 4)
    monkeypatch.setattr(res_mod, "COST_LIMIT", 10)
    with pytest.raises(BudgetExceededError):
        resilience_defect(f, 2, 0.1)
    with pytest.raises(BudgetExceededError):
        fourier_support(f, 2, 0.1)


def test_dictator_defect_and_witness():
    d = to_unit_interval(dictator(4))
    cert = resilience_defect(d, 1, 0.2)
    assert cert.defect == pytest.approx(0.5, abs=1e-12)
    assert not cert.passed
    S, z = cert.witness
    assert S == (1,)
    assert z == (0,)  # symbol 0 encodes +1, pushing the mean to 1
    ok = resilience_defect(d, 1, 0.6)
    assert ok.passed and ok.defect == pytest.approx(0.5, abs=1e-12)


def test_majority_defect():
    m = to_unit_interval(majority(3))
    cert = resilience_defect(m, 1, 0.3)
    # conditioning one vote moves the mean from 1/2 to 3/4
    assert cert.defect == pytest.approx(0.25, abs=1e-12)
    assert cert.passed


def test_r_zero_is_trivially_resilient(rng):
    f = random_function(rng, 3, 3)
    cert = resilience_defect(f, 0, 0.0)
    assert cert.defect == 0.0
    assert cert.passed
    assert cert.witness == ((), ())


def test_dictator_times_majority_levels():
    f = to_unit_interval(dictator_times_majority(6))
    assert resilience_defect(f, 1, 0.0).defect == pytest.approx(0.0, abs=1e-12)
    assert resilience_defect(f, 2, 0.0).defect == pytest.approx(0.1875, abs=1e-12)
    pm = dictator_times_majority(6)
    assert resilience_defect(pm, 2, 0.0).defect == pytest.approx(0.375, abs=1e-12)


def test_defect_monotone_in_r(rng):
    for q in (2, 3):
        f = random_function(rng, q, 3)
        prev = -1.0
        for r in range(0, 4):
            d = resilience_defect(f, r, 0.0).defect
            assert d >= prev - 1e-12
            prev = d
    with pytest.raises(DomainError):
        resilience_defect(f, 4, 0.0)


def test_fourier_support_majority_and_dictator():
    m = to_unit_interval(majority(3))
    assert fourier_support(m, 1, 0.2) == (1, 2, 3)
    assert fourier_support(m, 1, 0.3) == ()
    d = to_unit_interval(dictator(4))
    assert fourier_support(d, 1, 0.3) == (1,)
    # the dictator-times-majority product hides at level 1: no singleton weight
    f = to_unit_interval(dictator_times_majority(6))
    assert fourier_support(f, 1, 0.05) == ()
    assert 1 in fourier_support(f, 2, 0.05)


def test_fourier_support_matches_component_variances(rng):
    # independent route: full orthogonal decomposition
    for q, n in ((2, 4), (3, 3)):
        mu = random_measure(rng, q)
        f = random_function(rng, q, n, measure=mu)
        dec = efron_stein(f)
        alpha = 0.25
        r = 2
        want = set()
        for mask, var in dec.component_variances.items():
            size = bin(mask).count("1")
            if 0 < size <= r and var >= alpha * alpha:
                for i in range(n):
                    if mask >> i & 1:
                        want.add(i + 1)
        assert fourier_support(f, r, alpha) == tuple(sorted(want))


def test_cross_resilience():
    f = to_unit_interval(dictator(4, 1))
    g = to_unit_interval(dictator(4, 2))
    rep = cross_resilient(f, g, 1, 0.3)
    assert rep.passed and bool(rep)
    assert rep.support_f == (1,) and rep.support_g == (2,)
    clash = cross_resilient(f, f, 1, 0.3)
    assert not clash.passed
    h = to_unit_interval(dictator(3))
    with pytest.raises(DomainError):
        cross_resilient(f, h, 1, 0.3)


def _premise_function(rng, n, r, alpha):
    """Random Boolean-uniform table whose orders 1..r coefficients are tiny."""
    coeffs = np.zeros(2**n)
    limit = 2.0**-r * alpha
    for mask in range(1, 2**n):
        size = bin(mask).count("1")
        if size <= r:
            coeffs[mask] = rng.uniform(-0.9, 0.9) * limit
        else:
            coeffs[mask] = rng.normal() * 0.3
    coeffs[0] = rng.uniform(0.2, 0.8)
    return inverse_fourier(FourierExpansion(n, coeffs))


def test_sufficient_condition_constructed(rng):
    for _ in range(10):
        n = int(rng.integers(2, 6))
        r = int(rng.integers(1, 3))
        alpha = float(rng.uniform(0.1, 0.5))
        f = _premise_function(rng, n, r, alpha)
        rep = sufficient_condition_check(f, r, alpha)
        assert rep.premise_holds
        assert rep.certified
        assert rep.max_low_coefficient <= rep.threshold
        assert rep.defect <= alpha + 1e-12


def test_sufficient_condition_premise_failure():
    d = to_unit_interval(dictator(3))
    rep = sufficient_condition_check(d, 1, 0.3)
    assert not rep.premise_holds
    assert rep.defect is None
    assert not rep.certified


def test_resilience_implies_component_variance(rng):
    for q in (2, 3):
        for _ in range(5):
            n = int(rng.integers(2, 5))
            f = random_function(rng, q, n)
            r = int(rng.integers(1, n + 1))
            defect = resilience_defect(f, r, 0.0).defect
            rep = resilience_implies_variance(f, r, defect + 1e-9)
            assert rep.premise_passed
            assert rep.holds
            assert rep.max_component_variance <= (defect + 1e-9) ** 2 + 1e-12


def test_resilience_implies_variance_premise_failure():
    d = to_unit_interval(dictator(3))
    rep = resilience_implies_variance(d, 1, 0.1)
    assert not rep.premise_passed
    assert rep.holds is None
    assert rep.max_component_variance == pytest.approx(0.25, abs=1e-12)
