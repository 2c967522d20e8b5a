import itertools

import numpy as np
import pytest

from noisestab import (
    BoundViolation,
    BudgetExceededError,
    DegenerateDistributionError,
    DomainError,
    StepDistribution,
    TableFunction,
    correlated_bits,
    f3_chain,
    multi_correlation,
    multi_correlation_mc,
    negate_inputs,
    noisy_inner_product,
    pair_correlation,
    smoothing_check,
)
from noisestab.families import dictator, majority
from noisestab.tables import to_unit_interval

from conftest import random_function, random_joint


def brute_pair(f, g, P):
    """Pure-python enumeration of E[f(X) g(Y)] for 2-step laws."""
    q, n = f.q, f.n
    t = P.tensor()
    total = 0.0
    for x in itertools.product(range(q), repeat=n):
        for y in itertools.product(range(q), repeat=n):
            w = 1.0
            for a, b in zip(x, y):
                w *= t[a, b]
            if w:
                total += w * f(x) * g(y)
    return total


def test_noisy_inner_product_frozen():
    m3 = majority(3)
    assert noisy_inner_product(m3, m3, 1.0 / 3.0) == pytest.approx(7.0 / 27.0, abs=1e-12)
    d = to_unit_interval(dictator(4))
    for r in (0.0, 0.3, 0.8):
        assert noisy_inner_product(d, d, r) == pytest.approx((1 + r) / 4.0, abs=1e-12)


def test_noisy_inner_product_limits(rng):
    f = random_function(rng, 2, 3)
    g = random_function(rng, 2, 3)
    w = np.full(8, 1 / 8)
    assert noisy_inner_product(f, g, 1.0) == pytest.approx(float(w @ (f.values * g.values)), abs=1e-12)
    assert noisy_inner_product(f, g, 0.0) == pytest.approx(f.expectation() * g.expectation(), abs=1e-12)


def test_noisy_inner_product_validation(rng):
    f = random_function(rng, 3, 2)
    with pytest.raises(DomainError):
        noisy_inner_product(f, f, 0.5)
    g = random_function(rng, 2, 2, measure=np.array([0.3, 0.7]))
    with pytest.raises(DomainError):
        noisy_inner_product(g, g, 0.5)
    h = random_function(rng, 2, 2)
    with pytest.raises(DomainError):
        noisy_inner_product(h, h, 1.5)


def test_negative_rho_negation_identity(rng):
    for _ in range(5):
        f = random_function(rng, 2, 4)
        g = random_function(rng, 2, 4)
        gn = negate_inputs(g)
        for r in (0.2, 0.5, 0.9):
            assert noisy_inner_product(f, g, -r) == pytest.approx(
                noisy_inner_product(f, gn, r), abs=1e-12
            )


def test_pair_correlation_matches_brute_force(rng):
    for q in (2, 3):
        for _ in range(4):
            n = int(rng.integers(1, 4))
            P = StepDistribution(q, 2, random_joint(rng, q, 2))
            mg = np.asarray(P.tensor().sum(axis=1))
            f = random_function(rng, q, n, measure=mg)
            g = random_function(rng, q, n, measure=np.asarray(P.tensor().sum(axis=0)))
            assert pair_correlation(f, g, P) == pytest.approx(
                brute_pair(f, g, P), abs=1e-10
            )


def test_pair_correlation_ignores_attached_measures(rng):
    # the step law's own marginals are used, not whatever the functions carry
    P = StepDistribution(2, 2, random_joint(rng, 2, 2))
    f = random_function(rng, 2, 3)
    g = random_function(rng, 2, 3)
    fw = f.with_measure(np.array([0.9, 0.1]))
    gw = g.with_measure(np.array([0.2, 0.8]))
    assert pair_correlation(fw, gw, P) == pytest.approx(pair_correlation(f, g, P), abs=1e-12)


def test_pair_correlation_reduces_to_noisy_inner_product(rng):
    f = random_function(rng, 2, 4)
    g = random_function(rng, 2, 4)
    for r in (0.0, 0.3, 0.7):
        assert pair_correlation(f, g, correlated_bits(r)) == pytest.approx(
            noisy_inner_product(f, g, r), abs=1e-12
        )


def test_multi_correlation_matches_pair_route(rng):
    for q in (2, 3):
        P = StepDistribution(q, 2, random_joint(rng, q, 2))
        f = random_function(rng, q, 3)
        g = random_function(rng, q, 3)
        assert multi_correlation([f, g], P) == pytest.approx(
            pair_correlation(f, g, P), abs=1e-11
        )


def test_multi_correlation_f3_indicator():
    ind = TableFunction(3, 1, np.array([1.0, 0.0, 0.0]), range_tag="unit_interval")
    assert multi_correlation([ind] * 3, f3_chain()) == pytest.approx(1.0 / 12.0, abs=1e-14)


def test_multi_correlation_arity_checks(rng):
    P = f3_chain()
    f = random_function(rng, 3, 2)
    with pytest.raises(DomainError):
        multi_correlation([f, f], P)
    g = random_function(rng, 2, 2)
    with pytest.raises(DomainError):
        multi_correlation([g, g, g], P)


def test_multi_correlation_budget(rng):
    P = StepDistribution(3, 3, random_joint(rng, 3, 3))
    f = random_function(rng, 3, 6)
    with pytest.raises(BudgetExceededError):
        multi_correlation([f, f, f], P)


def test_multi_correlation_mc_agrees(rng):
    P = f3_chain()
    F = [random_function(rng, 3, 3) for _ in range(3)]
    exact = multi_correlation(F, P)
    est, hw = multi_correlation_mc(F, P, samples=120_000, seed=11)
    assert hw > 0
    assert abs(est - exact) < 4 * hw
    est2, hw2 = multi_correlation_mc(F, P, samples=120_000, seed=11)
    assert est == est2 and hw == hw2


def test_smoothing_check_random_pairs(rng):
    P = correlated_bits(0.5)
    for eps in (0.1, 0.5):
        for _ in range(3):
            F = [random_function(rng, 2, 4, kind="unit") for _ in range(2)]
            rep = smoothing_check(F, P, eps)
            assert rep.holds
            assert rep.difference <= eps + 1e-12
            assert 0.0 < rep.gamma < 1.0
            assert rep.smoothed_value == pytest.approx(rep.value, abs=eps + 1e-12)


def test_smoothing_check_triples_f3(rng):
    P = f3_chain()
    F = [random_function(rng, 3, 3, kind="unit") for _ in range(3)]
    rep = smoothing_check(F, P, 0.25)
    assert rep.holds


def test_smoothing_check_validation(rng):
    F2 = [random_function(rng, 2, 3, kind="unit") for _ in range(2)]
    with pytest.raises(DomainError):
        smoothing_check(F2, correlated_bits(0.5), 0.8)
    with pytest.raises(DegenerateDistributionError):
        smoothing_check(F2, correlated_bits(1.0), 0.1)
    bad = [random_function(rng, 2, 3, kind="gauss") for _ in range(2)]
    with pytest.raises(DomainError):
        smoothing_check(bad, correlated_bits(0.5), 0.1)
