import numpy as np
import pytest

from noisestab import (
    DomainError,
    TableFunction,
    check_arrow,
    check_pair_lower,
    check_theorem_multi,
    check_theorem_three,
    check_theorem_two,
    correlated_bits,
    guilbaud_constant,
    halfspace_stability,
    noisy_inner_product,
    pair_lower_bound_value,
    paradox_probability,
)
from noisestab.families import dictator, majority, threshold
from noisestab.tables import to_unit_interval

from conftest import random_function

GUILBAUD = 0.087739828045910905  # frozen from a 50-digit quadrature


def test_theorem_two_majority_holds():
    m = to_unit_interval(majority(11))
    rep = check_theorem_two(m, m, 0.5, 0.05, 1, 0.2)
    assert rep.verdict == "holds"
    assert rep.lhs == pytest.approx(0.3377398196607828, abs=1e-10)
    assert rep.margin == pytest.approx(0.04559351367255049, abs=1e-8)
    assert rep.hypotheses["resilience"].passed
    assert rep.direction == "upper"


def test_theorem_two_dictator_hypotheses_not_met():
    d = to_unit_interval(dictator(4))
    rep = check_theorem_two(d, d, 0.5, 0.001, 1, 0.2)
    assert rep.verdict == "hypotheses_not_met"
    assert rep.lhs == pytest.approx(0.375, abs=1e-12)
    assert rep.margin == pytest.approx(-0.04066666666666666, abs=1e-8)
    assert not rep.hypotheses["resilience"].passed


def test_theorem_two_rejects_pm_values():
    m = majority(3)
    with pytest.raises(DomainError):
        check_theorem_two(m, m, 0.5, 0.05, 1, 0.2)


def test_pair_lower_bound_identity(rng):
    # the lower value is the quadrant mass at the negated correlation
    assert pair_lower_bound_value(0.5, 0.5, 1.0 / 3.0) == pytest.approx(
        0.19591327601530364, abs=1e-10
    )
    for _ in range(10):
        a = float(rng.uniform(0.05, 0.95))
        b = float(rng.uniform(0.05, 0.95))
        rho = float(rng.uniform(0.0, 0.95))
        assert pair_lower_bound_value(a, b, rho) == pytest.approx(
            halfspace_stability(a, b, -rho), abs=1e-10
        )


def test_pair_lower_check_majority():
    m = to_unit_interval(majority(3))
    rep = check_pair_lower(m, m, 1.0 / 3.0, 0.0, 0, 0.0)
    assert rep.direction == "lower"
    assert rep.theorem_id == "two-lower"
    assert rep.lhs == pytest.approx(17.0 / 54.0, abs=1e-12)  # (1 + 7/27)/4
    assert rep.rhs == pytest.approx(0.19591327601530364, abs=1e-10)
    assert rep.verdict == "holds"
    assert rep.margin == pytest.approx(rep.lhs - rep.rhs, abs=1e-12)


def test_multi_holds_for_constants():
    P = correlated_bits(0.5)
    half = TableFunction(2, 1, np.full(2, 0.5))
    rep = check_theorem_multi([half, half], P, 0.01, 1, samples=50_000, seed=3)
    assert rep.verdict == "holds"
    assert rep.lhs == pytest.approx(0.25, abs=1e-12)
    est = rep.hypotheses["estimate"]
    assert est.strategy == "halfspace-family"
    assert rep.rhs == pytest.approx(est.value + 0.01, abs=1e-12)


def test_multi_inconclusive_never_violated():
    P = correlated_bits(0.5)
    m = to_unit_interval(majority(3))
    rep = check_theorem_multi([m, m], P, 0.001, 0, samples=50_000, seed=3)
    assert rep.verdict == "inconclusive_estimate"
    assert rep.lhs == pytest.approx(0.3515625, abs=1e-12)
    assert all(c.passed for c in rep.hypotheses["resilience"])


def test_multi_hypotheses_not_met():
    P = correlated_bits(0.5)
    m = to_unit_interval(majority(3))
    rep = check_theorem_multi([m, m], P, 0.008, 1, samples=20_000, seed=3)
    assert rep.verdict == "hypotheses_not_met"
    assert rep.hypotheses["alpha_required"] == pytest.approx(0.001)


def test_multi_deterministic():
    P = correlated_bits(0.3)
    m = to_unit_interval(majority(3))
    a = check_theorem_multi([m, m], P, 0.2, 0, samples=30_000, seed=7)
    b = check_theorem_multi([m, m], P, 0.2, 0, samples=30_000, seed=7)
    assert a.rhs == b.rhs and a.margin == b.margin


def test_theorem_three_majority_holds():
    m = to_unit_interval(majority(11))
    rep = check_theorem_three(m, m, 0.5, 0.05, 1, 0.2)
    assert rep.verdict == "holds"
    assert rep.hypotheses["cross_resilience"].passed
    assert rep.hypotheses["witness"] is None


def test_theorem_three_dictator_witness():
    d = to_unit_interval(dictator(4))
    rep = check_theorem_three(d, d, 0.5, 0.001, 1, 0.1)
    assert rep.verdict == "hypotheses_not_met"
    assert rep.margin < 0.0
    w = rep.hypotheses["witness"]
    assert w is not None
    assert w["S"] == (1,) and w["T"] == (1,)
    assert w["coefficient_f"] == pytest.approx(0.5, abs=1e-12)


def test_paradox_frozen_majorities():
    m3 = majority(3)
    assert paradox_probability(m3, m3, m3) == pytest.approx(1.0 / 18.0, abs=1e-12)
    m5 = majority(5)
    assert paradox_probability(m5, m5, m5) == pytest.approx(5.0 / 72.0, abs=1e-12)
    d = dictator(3)
    assert paradox_probability(d, d, d) == pytest.approx(0.0, abs=1e-14)


def test_paradox_dual_route_random(rng):
    # the pm-one identity recomputed here must match the enumeration route
    for _ in range(10):
        n = int(rng.integers(1, 5))
        fs = []
        for _ in range(3):
            vals = np.where(rng.random(2**n) < 0.5, -1.0, 1.0)
            fs.append(TableFunction(2, n, vals))
        p = paradox_probability(*fs)
        pairs = sum(
            noisy_inner_product(a, b, -1.0 / 3.0)
            for a, b in ((fs[0], fs[1]), (fs[1], fs[2]), (fs[0], fs[2]))
        )
        assert p == pytest.approx((1.0 + pairs) / 4.0, abs=1e-10)


def test_paradox_dual_route_zero_one(rng):
    for _ in range(10):
        n = int(rng.integers(1, 5))
        fs = []
        for _ in range(3):
            vals = (rng.random(2**n) < 0.5).astype(float)
            fs.append(TableFunction(2, n, vals))
        p = paradox_probability(*fs)
        pairs = sum(
            noisy_inner_product(a, b, -1.0 / 3.0)
            for a, b in ((fs[0], fs[1]), (fs[1], fs[2]), (fs[0], fs[2]))
        )
        means = sum(f.expectation() for f in fs)
        assert p == pytest.approx(1.0 - means + pairs, abs=1e-10)


def test_paradox_validation():
    m = majority(3)
    u = to_unit_interval(majority(3))
    with pytest.raises(DomainError):
        paradox_probability(m, m, majority(5))
    with pytest.raises(DomainError):
        paradox_probability(m, m, TableFunction(2, 3, np.full(8, 0.3)))
    with pytest.raises(DomainError):
        paradox_probability(m, m, u)  # mixed conventions


def test_guilbaud_constant():
    assert guilbaud_constant() == pytest.approx(GUILBAUD, abs=1e-10)


def test_arrow_majority_holds():
    m = majority(3)
    rep = check_arrow(m, m, m, 0.05, 1, 0.6)
    assert rep.verdict == "holds"
    assert rep.direction == "lower"
    assert rep.lhs == pytest.approx(1.0 / 18.0, abs=1e-12)
    assert rep.margin == pytest.approx(
        1.0 / 18.0 - (GUILBAUD - 0.05), abs=1e-9
    )
    assert rep.hypotheses["balanced"]


def test_arrow_unbalanced():
    t = threshold(3, 2)
    rep = check_arrow(t, t, t, 0.05, 1, 0.9)
    assert rep.verdict == "hypotheses_not_met"
    assert not rep.hypotheses["balanced"]


def test_arrow_zero_one_votes_not_balanced():
    u = to_unit_interval(majority(3))
    rep = check_arrow(u, u, u, 0.05, 1, 0.6)
    assert rep.verdict == "hypotheses_not_met"
    assert not rep.hypotheses["balanced"]


def test_report_margin_sign_matches_verdict():
    m = to_unit_interval(majority(11))
    upper = check_theorem_two(m, m, 0.5, 0.05, 1, 0.2)
    assert upper.margin >= 0.0 and upper.verdict == "holds"
    lower = check_pair_lower(m, m, 0.5, 0.0, 1, 0.2)
    assert (lower.margin >= 0.0) == (lower.verdict == "holds")
