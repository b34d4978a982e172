"""Step-size laws for the random-step-size walk.

Each family declares its closed-form mean, variance and zero mass so the
analytics layer never has to estimate model moments from samples.  The first
step size must be strictly positive; by default it follows the same family as
the later sizes conditioned on positivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class BrokenSizeModel(ValueError):
    """A sampled size violated the declared law (negative, or zero Y_1)."""


@dataclass(frozen=True)
class SizeDistribution:
    """Base class: one marginal law of a non-negative step size."""

    family = "abstract"

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def variance(self) -> float:
        raise NotImplementedError

    @property
    def zero_mass(self) -> float:
        """P{Y = 0}."""
        return 0.0

    # every built-in family has a finite third absolute moment
    has_third_moment = True

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def conditioned_positive(self) -> "SizeDistribution":
        """The law conditioned on Y > 0 (used for the default first step)."""
        if self.zero_mass == 0.0:
            return self
        raise NotImplementedError

    def to_dict(self) -> dict:
        d = {"family": self.family}
        d.update({k: v for k, v in self.__dict__.items()})
        return d


@dataclass(frozen=True)
class PointMass(SizeDistribution):
    value: float = 1.0
    family = "point"

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("point mass must sit at a non-negative value")

    @property
    def mean(self):
        return self.value

    @property
    def variance(self):
        return 0.0

    @property
    def zero_mass(self):
        return 1.0 if self.value == 0.0 else 0.0

    def sample(self, rng, size):
        return np.full(size, self.value, dtype=np.float64)

    def conditioned_positive(self):
        if self.value == 0.0:
            raise ValueError("point mass at 0 has no positive part")
        return self


@dataclass(frozen=True)
class ZeroInflatedPointMass(SizeDistribution):
    """Y = 0 with probability b, else a fixed positive value."""

    b: float = 0.5
    value: float = 1.0
    family = "zero-inflated-point"

    def __post_init__(self):
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"zero mass b={self.b} outside [0, 1]")
        if self.value <= 0:
            raise ValueError("the non-zero atom must be positive")

    @property
    def mean(self):
        return (1.0 - self.b) * self.value

    @property
    def variance(self):
        return self.b * (1.0 - self.b) * self.value**2

    @property
    def zero_mass(self):
        return self.b

    def sample(self, rng, size):
        u = rng.random(size)
        return np.where(u < self.b, 0.0, self.value)

    def conditioned_positive(self):
        return PointMass(self.value)


@dataclass(frozen=True)
class Exponential(SizeDistribution):
    scale: float = 1.0
    family = "exponential"

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("exponential scale must be positive")

    @property
    def mean(self):
        return self.scale

    @property
    def variance(self):
        return self.scale**2

    def sample(self, rng, size):
        return rng.exponential(self.scale, size)


@dataclass(frozen=True)
class LogNormal(SizeDistribution):
    mu_log: float = 0.0
    sigma_log: float = 1.0
    family = "lognormal"

    def __post_init__(self):
        if self.sigma_log < 0:
            raise ValueError("lognormal sigma must be >= 0")

    @property
    def mean(self):
        return float(np.exp(self.mu_log + self.sigma_log**2 / 2.0))

    @property
    def variance(self):
        s2 = self.sigma_log**2
        return float((np.exp(s2) - 1.0) * np.exp(2.0 * self.mu_log + s2))

    def sample(self, rng, size):
        return rng.lognormal(self.mu_log, self.sigma_log, size)


@dataclass(frozen=True)
class Gamma(SizeDistribution):
    shape: float = 1.0
    scale: float = 1.0
    family = "gamma"

    def __post_init__(self):
        if self.shape <= 0 or self.scale <= 0:
            raise ValueError("gamma shape/scale must be positive")

    @property
    def mean(self):
        return self.shape * self.scale

    @property
    def variance(self):
        return self.shape * self.scale**2

    def sample(self, rng, size):
        return rng.gamma(self.shape, self.scale, size)


@dataclass(frozen=True)
class DiscreteTable(SizeDistribution):
    """Finite table of non-negative values with given probabilities."""

    values: tuple = (1.0,)
    probs: tuple = (1.0,)
    family = "table"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        p = np.asarray(self.probs, dtype=np.float64)
        if v.shape != p.shape or v.ndim != 1 or v.size == 0:
            raise ValueError("values/probs must be equal-length 1-d tables")
        if np.any(v < 0) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("table needs non-negative values and probs summing to 1")
        object.__setattr__(self, "values", tuple(float(x) for x in v))
        object.__setattr__(self, "probs", tuple(float(x) for x in p))

    @property
    def mean(self):
        v, p = np.asarray(self.values), np.asarray(self.probs)
        return float(v @ p)

    @property
    def variance(self):
        v, p = np.asarray(self.values), np.asarray(self.probs)
        m = v @ p
        return float(v**2 @ p - m**2)

    @property
    def zero_mass(self):
        v, p = np.asarray(self.values), np.asarray(self.probs)
        return float(p[v == 0.0].sum())

    def sample(self, rng, size):
        return rng.choice(np.asarray(self.values), size=size, p=np.asarray(self.probs))

    def conditioned_positive(self):
        v, p = np.asarray(self.values), np.asarray(self.probs)
        keep = v > 0.0
        if not keep.any():
            raise ValueError("table has no positive part")
        p_pos = p[keep] / p[keep].sum()
        return DiscreteTable(tuple(v[keep]), tuple(p_pos))


_FAMILIES = {
    cls.family: cls
    for cls in (PointMass, ZeroInflatedPointMass, Exponential, LogNormal, Gamma, DiscreteTable)
}


def distribution_from_dict(spec: dict) -> SizeDistribution:
    spec = dict(spec)
    family = spec.pop("family", None)
    if family not in _FAMILIES:
        raise ValueError(f"unknown size family {family!r}; known: {sorted(_FAMILIES)}")
    if family == "table":
        spec["values"] = tuple(spec.get("values", ()))
        spec["probs"] = tuple(spec.get("probs", ()))
    return _FAMILIES[family](**spec)


def parse_distribution(text: str) -> SizeDistribution:
    """Parse a compact CLI spec like 'zero-inflated-point:b=0.5,value=1'."""
    family, _, rest = text.partition(":")
    spec: dict = {"family": family.strip()}
    if rest:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            spec[key.strip()] = float(val)
    return distribution_from_dict(spec)


@dataclass(frozen=True)
class StepSizeModel:
    """Laws of Y_1 (strictly positive) and of the iid later sizes Y_n, n >= 2."""

    later: SizeDistribution
    first: SizeDistribution = None  # default: later conditioned on positivity

    def __post_init__(self):
        if self.first is None:
            object.__setattr__(self, "first", self.later.conditioned_positive())
        if self.first.zero_mass != 0.0:
            raise ValueError("the first step size must be strictly positive")

    # declared model moments, used by the analytics layer
    @property
    def mu(self) -> float:
        return self.later.mean

    @property
    def eta_sq(self) -> float:
        return self.later.variance

    @property
    def b(self) -> float:
        return self.later.zero_mass

    @property
    def mu1(self) -> float:
        return self.first.mean

    @property
    def eta1_sq(self) -> float:
        return self.first.variance

    def sample_first(self, rng: np.random.Generator) -> float:
        y = float(self.first.sample(rng, 1)[0])
        if y <= 0.0:
            raise BrokenSizeModel(f"first step size {y} is not positive")
        return y

    def sample_later(self, rng: np.random.Generator, size: int) -> np.ndarray:
        y = self.later.sample(rng, size)
        if y.size and y.min() < 0.0:
            raise BrokenSizeModel("sampled a negative step size")
        return y

    def to_dict(self) -> dict:
        d = {"later": self.later.to_dict()}
        if self.first != self.later.conditioned_positive():
            d["first"] = self.first.to_dict()
        return d

    @classmethod
    def from_dict(cls, spec: dict) -> "StepSizeModel":
        later = distribution_from_dict(spec["later"])
        first = distribution_from_dict(spec["first"]) if "first" in spec else None
        return cls(later=later, first=first)


def unit_sizes() -> StepSizeModel:
    """Y identically 1: the random-step-size walk degenerates to the plain walk."""
    return StepSizeModel(later=PointMass(1.0))
