import numpy as np
import pytest

from noisestab import (
    DomainError,
    TableFunction,
    coords_of,
    efron_stein,
    fourier_transform,
    inverse_fourier,
    mask_of,
)
from noisestab.families import majority, parity
from noisestab.fourier import (
    component_variances_from_moments,
    conditional_second_moments,
)

from conftest import random_function, random_measure


def test_mask_round_trip():
    assert mask_of([1, 3], 3) == 0b101
    assert coords_of(0b101) == (1, 3)
    assert mask_of([], 3) == 0
    assert coords_of(0) == ()
    with pytest.raises(DomainError):
        mask_of([4], 3)
    with pytest.raises(DomainError):
        mask_of([0], 3)


def test_parity_has_single_coefficient():
    for S in ([1], [2, 3], [1, 2, 3]):
        p = parity(3, S)
        coeffs = fourier_transform(p).as_dict(1e-12)
        assert coeffs == {mask_of(S, 3): pytest.approx(1.0)}


def test_majority_coefficients_frozen():
    coeffs = fourier_transform(majority(3)).as_dict(1e-12)
    assert coeffs[1] == pytest.approx(0.5, abs=1e-12)
    assert coeffs[2] == pytest.approx(0.5, abs=1e-12)
    assert coeffs[4] == pytest.approx(0.5, abs=1e-12)
    assert coeffs[7] == pytest.approx(-0.5, abs=1e-12)
    assert set(coeffs) == {1, 2, 4, 7}


def test_parseval_and_inverse(rng):
    f = random_function(rng, 2, 4)
    exp = fourier_transform(f)
    coeffs = exp.coefficients
    assert np.sum(coeffs**2) == pytest.approx(float(np.mean(f.values**2)), abs=1e-12)
    back = inverse_fourier(exp)
    assert np.allclose(back.values, f.values, atol=1e-12)
    # coefficient() accepts coordinate sets or masks
    assert exp.coefficient([1, 2]) == exp.coefficient(0b11)


def test_weight_at_degree_majority():
    exp = fourier_transform(majority(3))
    assert exp.weight_at_degree(1) == pytest.approx(0.75)
    assert exp.weight_at_degree(3) == pytest.approx(0.25)
    assert exp.weight_at_degree(2) == pytest.approx(0.0)


def test_fourier_rejects_non_boolean(rng):
    f = random_function(rng, 3, 2)
    with pytest.raises(DomainError):
        fourier_transform(f)
    g = random_function(rng, 2, 2, measure=np.array([0.3, 0.7]))
    with pytest.raises(DomainError):
        fourier_transform(g)


def test_efron_stein_indicator_frozen():
    # q=3, n=1, f = 1(x=0) uniform: mean 1/3, Var of the singleton part 2/9
    f = TableFunction(3, 1, np.array([1.0, 0.0, 0.0]))
    dec = efron_stein(f)
    assert dec.components[0].values[0] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert dec.component_variances[1] == pytest.approx(2.0 / 9.0, abs=1e-12)


def test_efron_stein_reconstruction_orthogonality(rng):
    mu = random_measure(rng, 3)
    f = random_function(rng, 3, 3, measure=mu)
    dec = efron_stein(f)
    assert np.allclose(dec.reconstruction(), f.values, atol=1e-10)
    w = f.weights()
    comps = dec.components
    masks = sorted(comps)
    # mean-zero on strict-subset conditionals; pairwise orthogonal
    for a in masks:
        for b in masks:
            if a != b:
                ip = float(w @ (comps[a].values * comps[b].values))
                assert abs(ip) < 1e-10
    # variance decomposition
    var_sum = sum(dec.component_variances[m] for m in masks if m != 0)
    assert var_sum == pytest.approx(f.variance(), abs=1e-10)


def test_efron_stein_components_depend_only_on_their_coordinates(rng):
    f = random_function(rng, 2, 3)
    dec = efron_stein(f)
    t = dec.components[0b010].tensor()
    # mask 0b010 = coordinate 2: constant along axes 0 and 2
    assert np.allclose(t, t[0:1, :, 0:1], atol=1e-12)


def test_efron_stein_boolean_matches_fourier(rng):
    f = random_function(rng, 2, 4)
    dec = efron_stein(f)
    exp = fourier_transform(f)
    for mask, var in dec.component_variances.items():
        if mask:
            assert var == pytest.approx(float(exp.coefficients[mask] ** 2), abs=1e-10)


def test_variance_above(rng):
    f = random_function(rng, 2, 4)
    dec = efron_stein(f)
    total = sum(v for m, v in dec.component_variances.items() if m)
    high = sum(
        v for m, v in dec.component_variances.items() if bin(m).count("1") > 2
    )
    assert dec.variance_above(2) == pytest.approx(high, abs=1e-12)
    assert dec.variance_above(0) == pytest.approx(total, abs=1e-12)


def test_second_moment_route_matches_direct(rng):
    # Q(U) = E[(E[f|X_U])^2] plus Moebius gives the same component variances
    mu = random_measure(rng, 3)
    f = random_function(rng, 3, 3, measure=mu)
    dec = efron_stein(f)
    all_masks = list(range(8))
    moments = conditional_second_moments(f, all_masks)
    for mask in range(1, 8):
        var = component_variances_from_moments(moments, mask)
        assert var == pytest.approx(dec.component_variances[mask], abs=1e-10)
