"""Parameter validation, regime classification and the step-action algebra.

The walk lives on the integer lattice in ``d`` dimensions.  Each remembered
step is a signed coordinate vector (or the zero vector once the walker has
rested), and each update acts on it with one of the matrices

    +I, -I, +J, -J, ..., +J^(d-1), -J^(d-1), O

where ``J`` is the cyclic shift sending e_i -> e_{i-1} (indices mod d) and
``O`` is the zero matrix.  Actions are stored as (sign, shift) pairs rather
than dense matrices, which keeps a step update O(1) instead of O(d^2); the
equivalence with the dense products is pinned down by tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for deciding equality with critical parameter values (r = 1/2,
# p = (2d+1)/4d) and for the probability-simplex check.
CRITICAL_TOL = 1e-12

STOPS = "stops"
RANDOM_STEPS = "random-steps"
VARIANTS = (STOPS, RANDOM_STEPS)

SUB_CRITICAL = "sub-critical"
CRITICAL = "critical"
SUPER_CRITICAL = "super-critical"


@dataclass(frozen=True)
class WalkParams:
    """Walk parameters: dimension and the (p, q, r) action probabilities.

    ``p`` repeats the remembered step, each of the 2d-1 alternative moves has
    probability ``q``, and ``r`` rests.  ``q`` is always derived from
    (d, p, r), so p + q(2d-1) + r = 1 holds by construction.
    """

    d: int
    p: float
    q: float
    r: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        for name in ("p", "q", "r"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        total = self.p + self.q * (2 * self.d - 1) + self.r
        if abs(total - 1.0) > CRITICAL_TOL:
            raise ValueError(
                f"p + q(2d-1) + r = {total!r} violates the probability simplex"
            )

    @property
    def move_prob(self) -> float:
        """Probability that a single update is a move (1 - r)."""
        return self.p + self.q * (2 * self.d - 1)


def validate_params(d: int, p: float, r: float = 0.0) -> WalkParams:
    """Build WalkParams with q = (1 - p - r) / (2d - 1).

    Rejects d < 1, negative probabilities and p + r > 1 (no valid q).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if p < 0.0 or r < 0.0:
        raise ValueError(f"probabilities must be non-negative, got p={p}, r={r}")
    if p + r > 1.0 + CRITICAL_TOL:
        raise ValueError(f"p + r = {p + r} exceeds 1: no valid q exists")
    q = max(0.0, (1.0 - p - r)) / (2 * d - 1)
    return WalkParams(d=int(d), p=float(p), q=q, r=float(r))


@dataclass(frozen=True)
class StepAction:
    """One update action: a signed cyclic shift, or a rest.

    Move actions carry sign in {+1, -1} and shift in [0, d-1] (the power of
    the cyclic shift).  Rest actions carry neither.
    """

    kind: str  # "move" | "rest"
    sign: int | None = None
    shift: int | None = None

    def __post_init__(self):
        if self.kind == "move":
            if self.sign not in (1, -1):
                raise ValueError(f"move action needs sign +-1, got {self.sign}")
            if self.shift is None or self.shift < 0:
                raise ValueError(f"move action needs shift >= 0, got {self.shift}")
        elif self.kind == "rest":
            if self.sign is not None or self.shift is not None:
                raise ValueError("rest actions carry no sign/shift")
        else:
            raise ValueError(f"unknown action kind {self.kind!r}")

    @classmethod
    def move(cls, sign: int, shift: int) -> "StepAction":
        return cls("move", sign, shift)

    @classmethod
    def rest(cls) -> "StepAction":
        return cls("rest")


@dataclass(frozen=True)
class UnitStep:
    """A remembered step: +-e_axis (axis in 1..d), or the zero step.

    The zero step is encoded as axis=0, sign=0.
    """

    axis: int
    sign: int

    def __post_init__(self):
        if self.axis == 0:
            if self.sign != 0:
                raise ValueError("zero step carries sign 0")
        elif self.axis < 0 or self.sign not in (1, -1):
            raise ValueError(f"bad unit step (axis={self.axis}, sign={self.sign})")

    @property
    def kind(self) -> str:
        return "zero" if self.axis == 0 else "axis"

    @property
    def norm_sq(self) -> int:
        return 0 if self.axis == 0 else 1

    @classmethod
    def zero(cls) -> "UnitStep":
        return cls(0, 0)

    @classmethod
    def along(cls, axis: int, sign: int) -> "UnitStep":
        return cls(axis, sign)


@dataclass(frozen=True)
class RegimeLabel:
    variant: str
    regime: str  # sub-critical | critical | super-critical


def steps_critical_p(d: int) -> float:
    """Critical memory parameter (2d+1)/(4d) of the random-step-size walk."""
    return (2 * d + 1) / (4 * d)


def classify_regime(params: WalkParams, variant: str) -> RegimeLabel:
    """Ternary regime classification with tolerance CRITICAL_TOL at the knots.

    stops: sub-critical for r > 1/2, critical at r = 1/2, super-critical
    for r < 1/2.  random-steps (requires r = 0): classified by p against
    (2d+1)/4d, super-critical above.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == STOPS:
        x = params.r - 0.5
    else:
        if params.r != 0.0:
            raise ValueError("random-steps variant requires r = 0")
        x = params.p - steps_critical_p(params.d)
    if abs(x) <= CRITICAL_TOL:
        regime = CRITICAL
    elif x > 0.0:
        regime = SUB_CRITICAL if variant == STOPS else SUPER_CRITICAL
    else:
        regime = SUPER_CRITICAL if variant == STOPS else SUB_CRITICAL
    return RegimeLabel(variant=variant, regime=regime)


def action_from_uniform(u: float, params: WalkParams) -> StepAction:
    """Map one uniform draw in [0, 1) to an action.

    Layout of the unit interval: [0, p) repeats (+I); the next 2d-1 slices of
    width q are -I, +J, -J, +J^2, -J^2, ...; the remainder rests.  The walk
    kernels use the identical mapping, so a recorded uniform replays to the
    same action everywhere.
    """
    d, p, q, r = params.d, params.p, params.q, params.r
    if u < p:
        return StepAction.move(1, 0)
    if r > 0.0 and u >= p + q * (2 * d - 1):
        return StepAction.rest()
    if q > 0.0:
        j = min(int((u - p) / q), 2 * d - 2)
    else:
        j = 0
    if j == 0:
        return StepAction.move(-1, 0)
    return StepAction.move(1 if j % 2 == 1 else -1, (j + 1) // 2)


def sample_action(params: WalkParams, rng: np.random.Generator) -> StepAction:
    """Draw one action (+I w.p. p, each alternative w.p. q, rest w.p. r)."""
    return action_from_uniform(rng.random(), params)


def first_step_from_uniform(u: float, d: int) -> UnitStep:
    """Map one uniform draw to the first step, uniform over the 2d signed axes."""
    j = min(int(u * 2 * d), 2 * d - 1)
    return UnitStep.along(j // 2 + 1, 1 if j % 2 == 0 else -1)


def sample_first_step(d: int, rng: np.random.Generator) -> UnitStep:
    return first_step_from_uniform(rng.random(), d)


def apply_action(a: StepAction, x: UnitStep, d: int) -> UnitStep:
    """Apply an action to a remembered step.

    rest -> zero; zero in -> zero out; a move (sign s, shift m) sends
    (axis i, sign sigma) to (((i-1-m) mod d) + 1, s*sigma), which is the
    dense product s * J^m @ x.
    """
    if x.axis > d:
        raise ValueError(f"step axis {x.axis} out of range for dimension {d}")
    if a.kind == "rest" or x.axis == 0:
        return UnitStep.zero()
    axis = ((x.axis - 1 - a.shift) % d) + 1
    return UnitStep.along(axis, a.sign * x.sign)
