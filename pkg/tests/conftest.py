import numpy as np
import pytest

from noisestab import TableFunction
from noisestab.rng import substream


def random_function(rng, q, n, kind="unit", measure=None):
    size = q**n
    if kind == "unit":
        return TableFunction(q, n, rng.random(size), measure=measure, range_tag="unit_interval")
    if kind == "sign":
        vals = np.where(rng.random(size) < 0.5, -1.0, 1.0)
        return TableFunction(q, n, vals, measure=measure, range_tag="pm_one")
    if kind == "indicator":
        vals = (rng.random(size) < 0.5).astype(float)
        return TableFunction(q, n, vals, measure=measure, range_tag="unit_interval")
    return TableFunction(q, n, rng.normal(size=size), measure=measure)


def random_measure(rng, q):
    w = rng.random(q) + 0.2
    return w / w.sum()


def random_joint(rng, q, steps):
    """Full-support random step distribution table."""
    w = rng.random(q**steps) + 0.05
    return w / w.sum()


@pytest.fixture
def rng():
    return substream(20260822, "tests")
