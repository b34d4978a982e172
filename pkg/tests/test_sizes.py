"""Step-size families: declared moments vs sampled moments, first-step law."""

import numpy as np
import pytest

from merw.sizes import (
    BrokenSizeModel,
    DiscreteTable,
    Exponential,
    Gamma,
    LogNormal,
    PointMass,
    StepSizeModel,
    ZeroInflatedPointMass,
    distribution_from_dict,
    parse_distribution,
    unit_sizes,
)

FAMILIES = [
    PointMass(2.0),
    ZeroInflatedPointMass(b=0.5, value=1.0),
    ZeroInflatedPointMass(b=0.3, value=2.5),
    Exponential(1.7),
    LogNormal(0.2, 0.6),
    Gamma(2.0, 0.5),
    DiscreteTable((0.0, 1.0, 3.0), (0.2, 0.5, 0.3)),
]


@pytest.mark.parametrize("dist", FAMILIES, ids=lambda d: d.family)
def test_declared_moments_match_samples(dist):
    rng = np.random.default_rng(42)
    n = 400_000
    y = dist.sample(rng, n)
    assert y.min() >= 0.0
    se_mean = 4 * np.sqrt(max(dist.variance, 1e-30) / n) + 1e-12
    assert abs(y.mean() - dist.mean) < se_mean
    if dist.variance > 0:
        # fourth-moment SE for the sample variance, padded for skew families
        assert abs(y.var() - dist.variance) < 0.05 * dist.variance + 1e-12
    assert abs(np.mean(y == 0.0) - dist.zero_mass) < 4 * np.sqrt(0.25 / n) + 1e-12


def test_zero_inflated_moments_closed_form():
    d = ZeroInflatedPointMass(b=0.5, value=1.0)
    assert d.mean == pytest.approx(0.5)
    assert d.variance == pytest.approx(0.25)
    assert d.zero_mass == 0.5


def test_conditioned_positive():
    assert ZeroInflatedPointMass(b=0.5, value=2.0).conditioned_positive() == PointMass(2.0)
    t = DiscreteTable((0.0, 1.0, 2.0), (0.5, 0.25, 0.25)).conditioned_positive()
    assert t.values == (1.0, 2.0)
    assert t.probs == (0.5, 0.5)
    assert Exponential(1.0).conditioned_positive() == Exponential(1.0)
    with pytest.raises(ValueError):
        PointMass(0.0).conditioned_positive()


def test_model_first_defaults_to_positive_part():
    m = StepSizeModel(later=ZeroInflatedPointMass(b=0.5, value=1.0))
    assert m.first == PointMass(1.0)
    assert m.mu == pytest.approx(0.5)
    assert m.eta_sq == pytest.approx(0.25)
    assert m.b == 0.5
    assert m.mu1 == 1.0
    assert m.eta1_sq == 0.0


def test_model_rejects_zero_mass_first():
    with pytest.raises(ValueError):
        StepSizeModel(later=Exponential(1.0), first=ZeroInflatedPointMass(b=0.1, value=1.0))


def test_first_sample_positive():
    m = unit_sizes()
    rng = np.random.default_rng(0)
    assert m.sample_first(rng) == 1.0
    assert np.all(m.sample_later(rng, 100) == 1.0)


def test_broken_model_detected():
    class Negative(PointMass):
        def sample(self, rng, size):
            return np.full(size, -1.0)

    m = StepSizeModel(later=Exponential(1.0), first=Exponential(1.0))
    object.__setattr__(m, "later", Negative(1.0))
    with pytest.raises(BrokenSizeModel):
        m.sample_later(np.random.default_rng(0), 10)


def test_serialization_round_trip():
    for dist in FAMILIES:
        m = StepSizeModel(later=dist)
        again = StepSizeModel.from_dict(m.to_dict())
        assert again == m


def test_parse_distribution():
    d = parse_distribution("zero-inflated-point:b=0.5,value=1")
    assert d == ZeroInflatedPointMass(b=0.5, value=1.0)
    assert parse_distribution("exponential:scale=2") == Exponential(2.0)
    with pytest.raises(ValueError):
        parse_distribution("no-such-family")
    with pytest.raises(ValueError):
        distribution_from_dict({"family": "table", "values": [1.0], "probs": [0.5]})
