"""Exact single-path simulation of both walk variants.

A path keeps all of its past steps in memory (the dynamics admit no sublinear
exact simulation) but the returned trace records aggregates only at the
requested checkpoints; raw steps are retained only on request.

One random source drives one path.  Per path the draws are consumed in a
fixed block order -- first-step uniform, remembered-index block, action
block, then (random-steps variant) first size and later-size block -- so a
path is a pure function of (parameters, n, generator state).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import RANDOM_STEPS, STOPS, WalkParams
from .sizes import BrokenSizeModel, StepSizeModel


def default_checkpoints(n: int) -> np.ndarray:
    """Powers of two up to n, plus n itself."""
    cps = [1]
    while cps[-1] * 2 <= n:
        cps.append(cps[-1] * 2)
    if cps[-1] != n:
        cps.append(n)
    return np.asarray(cps, dtype=np.int64)


def dense_checkpoints(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=np.int64)


def _check_checkpoints(checkpoints, n: int) -> np.ndarray:
    if checkpoints is None:
        return default_checkpoints(n)
    cps = np.asarray(checkpoints, dtype=np.int64)
    if cps.ndim != 1 or cps.size == 0:
        raise ValueError("checkpoints must be a non-empty 1-d index set")
    cps = np.unique(cps)
    if cps[0] < 1 or cps[-1] > n:
        raise ValueError(f"checkpoints must lie in [1, {n}]")
    return cps


@dataclass(frozen=True)
class WalkTrace:
    """Checkpoint statistics of one simulated path.

    moves[j] counts the moves among the first checkpoints[j] steps (Z* for
    the stops variant, the nonzero-size count for random steps); position_int
    is the unit-step position W, position_real the size-weighted position S,
    sigma_diag the per-axis visit counts.  steps holds the raw
    (axis, sign, size) records when the path was simulated with
    keep_steps=True, else None.
    """

    params: WalkParams
    variant: str
    n: int
    checkpoints: np.ndarray
    moves: np.ndarray
    position_int: np.ndarray
    position_real: np.ndarray
    sigma_diag: np.ndarray
    steps: tuple | None = None

    @property
    def d(self) -> int:
        return self.params.d

    def checkpoint_index(self, k: int) -> int:
        i = int(np.searchsorted(self.checkpoints, k))
        if i >= len(self.checkpoints) or self.checkpoints[i] != k:
            raise KeyError(f"{k} is not a recorded checkpoint")
        return i

    def delays(self) -> np.ndarray:
        """Number of delays at each checkpoint (checkpoint minus moves)."""
        return self.checkpoints - self.moves


def path_statistics(trace: WalkTrace, k: int):
    """The stored (moves, W, S, sigma_diag) aggregates at checkpoint k."""
    i = trace.checkpoint_index(k)
    return (
        int(trace.moves[i]),
        trace.position_int[i].copy(),
        trace.position_real[i].copy(),
        trace.sigma_diag[i].copy(),
    )


def recompute_statistics(trace: WalkTrace, k: int):
    """Brute-force re-scan of the raw step list (requires keep_steps=True)."""
    if trace.steps is None:
        raise ValueError("trace was simulated without keep_steps=True")
    axis, sign, y = trace.steps
    axis, sign, y = axis[:k], sign[:k], y[:k]
    d = trace.d
    if trace.variant == STOPS:
        moves = int(np.count_nonzero(axis))
    else:
        moves = int(np.count_nonzero(y))
    w = np.zeros(d, dtype=np.int64)
    s = np.zeros(d, dtype=np.float64)
    sig = np.zeros(d, dtype=np.int64)
    for i in range(1, d + 1):
        on = axis == i
        w[i - 1] = sign[on].sum()
        s[i - 1] = (sign[on] * y[on]).sum()
        sig[i - 1] = int(on.sum())
    return moves, w, s, sig


def _simulate(params, sizes, n, checkpoints, rng, keep_steps):
    if n < 1:
        raise ValueError(f"path length must be >= 1, got {n}")
    cps = _check_checkpoints(checkpoints, n)
    variant = STOPS if sizes is None else RANDOM_STEPS

    # fixed draw order: first step, remembered indices, actions, sizes
    first_u = rng.random()
    if n > 1:
        beta_idx = rng.integers(0, np.arange(1, n, dtype=np.int64))
        act_u = rng.random(n - 1)
    else:
        beta_idx = np.zeros(0, dtype=np.int64)
        act_u = np.zeros(0, dtype=np.float64)

    axis = np.zeros(n, dtype=np.int16)
    sign = np.zeros(n, dtype=np.int8)
    _kernels.direction_walk(
        params.d, params.p, params.q, params.r, first_u, beta_idx, act_u, axis, sign
    )

    if variant == STOPS:
        y = np.ones(n, dtype=np.float64)
        move_ind = (axis != 0).astype(np.uint8)
    else:
        y = np.empty(n, dtype=np.float64)
        y[0] = sizes.sample_first(rng)
        if n > 1:
            y[1:] = sizes.sample_later(rng, n - 1)
        move_ind = (y != 0.0).astype(np.uint8)

    ncp = len(cps)
    moves = np.zeros(ncp, dtype=np.int64)
    w = np.zeros((ncp, params.d), dtype=np.int64)
    s = np.zeros((ncp, params.d), dtype=np.float64)
    sig = np.zeros((ncp, params.d), dtype=np.int64)
    _kernels.checkpoint_stats(axis, sign, y, move_ind, cps, moves, w, s, sig)

    steps = (axis, sign, y) if keep_steps else None
    return WalkTrace(
        params=params,
        variant=variant,
        n=int(n),
        checkpoints=cps,
        moves=moves,
        position_int=w,
        position_real=s,
        sigma_diag=sig,
        steps=steps,
    )


def simulate_stops(
    params: WalkParams,
    n: int,
    rng: np.random.Generator,
    checkpoints=None,
    keep_steps: bool = False,
) -> WalkTrace:
    """Simulate one path of the walk with stops."""
    return _simulate(params, None, n, checkpoints, rng, keep_steps)


def simulate_random_steps(
    params: WalkParams,
    sizes: StepSizeModel,
    n: int,
    rng: np.random.Generator,
    checkpoints=None,
    keep_steps: bool = False,
) -> WalkTrace:
    """Simulate one path of the random-step-size walk (requires r = 0)."""
    if params.r != 0.0:
        raise ValueError("random-steps variant requires r = 0")
    if sizes is None:
        raise BrokenSizeModel("random-steps variant needs a StepSizeModel")
    return _simulate(params, sizes, n, checkpoints, rng, keep_steps)


def moves_series_stops(params: WalkParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Dense moves count Z*_1..Z*_n of one stops path.

    Same path law as simulate_stops but skips the positional aggregates, so
    long dense series (QSL / iterated-logarithm diagnostics) stay cheap.
    """
    if n < 1:
        raise ValueError(f"path length must be >= 1, got {n}")
    first_u = rng.random()
    if n > 1:
        beta_idx = rng.integers(0, np.arange(1, n, dtype=np.int64))
        act_u = rng.random(n - 1)
    else:
        beta_idx = np.zeros(0, dtype=np.int64)
        act_u = np.zeros(0, dtype=np.float64)
    axis = np.zeros(n, dtype=np.int16)
    sign = np.zeros(n, dtype=np.int8)
    _kernels.direction_walk(
        params.d, params.p, params.q, params.r, first_u, beta_idx, act_u, axis, sign
    )
    return np.cumsum(axis != 0, dtype=np.int64)


def moves_series_random_steps(sizes: StepSizeModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Dense moves count of one random-steps path.

    The nonzero-size count depends only on the size draws (the direction
    machinery is independent of them), so the directions are not simulated.
    """
    if n < 1:
        raise ValueError(f"path length must be >= 1, got {n}")
    y = np.empty(n, dtype=np.float64)
    y[0] = sizes.sample_first(rng)
    if n > 1:
        y[1:] = sizes.sample_later(rng, n - 1)
    return np.cumsum(y != 0.0, dtype=np.int64)
