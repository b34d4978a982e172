"""Deterministic quantities behind the walk's limit theorems.

Martingale normalizers a_n, exact and asymptotic move-count expectations,
the partial sums u_n = sum 1/a_k^2 and their three-regime limits (including
the generalized hypergeometric value 3F2(1,1,1; 2-r, 2-r; 1)), limit moments
of the normalized move count, the regime constants of the random-step-size
walk, and the martingale transforms of simulated traces.

All gamma ratios go through log-gamma differences so nothing overflows for
path lengths up to 1e8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, poch

from .core import CRITICAL_TOL, RANDOM_STEPS, STOPS, steps_critical_p
from .engine import WalkTrace
from .sizes import StepSizeModel


class DomainError(ValueError):
    """A quantity was requested outside its domain of definition."""


def _check_r(r: float):
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"stop probability r={r} outside [0, 1]")


# ---------------------------------------------------------------------------
# normalizers and expectations of the move count
# ---------------------------------------------------------------------------

def a_coefficients(r: float, n: int) -> np.ndarray:
    """The normalizer sequence a_1..a_n with a_1 = 1, a_{k+1}/a_k = 1 + (1-r)/k.

    Computed in log space (cumulative log1p), which keeps the relative error
    near 1e-13 even for n = 1e6 and never overflows.
    """
    _check_r(r)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = np.arange(1, n, dtype=np.float64)
    log_a = np.concatenate(([0.0], np.cumsum(np.log1p((1.0 - r) / k))))
    return np.exp(log_a)


def expected_moves(r: float, n) -> float | np.ndarray:
    """E(moves after n steps) = Gamma(n+1-r) / (Gamma(2-r) Gamma(n)).

    Equals a_n; behaves like n^(1-r)/Gamma(2-r) for large n.  Accepts an
    array of lengths.  The ratio Gamma(n+1-r)/Gamma(n) goes through the
    Pochhammer routine: it cannot overflow (the value is at most n) and,
    unlike a log-gamma difference, keeps full precision at n = 1e8.
    """
    _check_r(r)
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 1):
        raise ValueError("n must be >= 1")
    out = poch(n_arr, 1.0 - r) / math.gamma(2.0 - r)
    return float(out) if np.ndim(n) == 0 else out


@dataclass(frozen=True)
class NormalizerTable:
    """a_1..a_n and the partial sums u_0..u_{n-1} of 1/a_k^2 for one r."""

    r: float
    n: int
    a: np.ndarray
    u: np.ndarray


def normalizer_table(r: float, n: int) -> NormalizerTable:
    a = a_coefficients(r, n)
    u = np.cumsum(1.0 / a**2)
    return NormalizerTable(r=r, n=n, a=a, u=u)


def u_partial(r: float, n: int) -> float:
    """u_{n-1} = sum_{k=1..n} 1/a_k^2."""
    a = a_coefficients(r, n)
    return float(np.sum(1.0 / a**2))


# ---------------------------------------------------------------------------
# the hypergeometric limit of u_n and the three-regime description
# ---------------------------------------------------------------------------

class Hyp3F2Result(NamedTuple):
    """Value of 3F2(1,1,1; 2-r, 2-r; 1) with a reported error bound."""

    value: float
    error_bound: float
    terms: int

    def __float__(self):
        return self.value


_HYP_REL_STOP = 1e-14
_HYP_MAX_TERMS = 10_000_000
_HYP_BLOCK = 65_536


def hyp3f2_unit(r: float) -> Hyp3F2Result:
    """3F2(1,1,1; 2-r, 2-r; 1) = sum_k (k!)^2 / ((2-r)_k)^2 for r < 1/2.

    Terms are summed until term/partial-sum < 1e-14 (capped at 1e7 terms);
    the remaining tail is added via a midpoint integral estimate of the
    gamma-ratio terms, and the returned error bound covers the residual of
    that estimate.  The series diverges at r >= 1/2.
    """
    if not 0.0 <= r < 0.5:
        raise DomainError(f"3F2(1,1,1;2-r,2-r;1) requires 0 <= r < 1/2, got r={r}")
    # terms are generated in log space and accumulated in extended precision:
    # a plain float64 product or cumsum drifts by ~K*eps over 1e7 terms,
    # which already shows up at the 1e-10 level in the slowly convergent
    # cases near r = 1/2
    total = 0.0
    log_t = np.longdouble(0.0)  # log of the first term of the next block
    last_term = 1.0
    k_next = 0
    while True:
        width = min(_HYP_BLOCK, _HYP_MAX_TERMS - k_next)
        m = np.arange(k_next, k_next + width, dtype=np.longdouble)
        # log(t_{k+1}/t_k) = 2 log((k+1) / (k+2-r))
        log_ratios = 2.0 * (np.log(m + 1.0) - np.log(m + 2.0 - r))
        cum = np.cumsum(log_ratios)
        block = np.exp(log_t + np.concatenate((np.zeros(1, np.longdouble), cum[:-1])))
        total += float(block.sum())
        last_term = float(block[-1])
        log_t += cum[-1]
        k_next += width
        if last_term <= _HYP_REL_STOP * total or k_next >= _HYP_MAX_TERMS:
            break
    k_last = k_next - 1  # last index included in the sum
    t_next = float(np.exp(log_t))
    # tail over k > k_last: terms behave like G^2 * (k + 1 - r/2)^(2r-2) with
    # G = Gamma(2-r); midpoint rule gives the integral from k_last + 1/2
    g2 = math.exp(2.0 * gammaln(2.0 - r))
    base = k_last + 1.5 - r / 2.0
    tail = g2 * base ** (2.0 * r - 1.0) / (1.0 - 2.0 * r)
    # residual: midpoint-rule curvature ~ t/(6k), the O(1/k^2) defect of the
    # gamma-ratio power approximation (coefficient < 0.25, checked against
    # exact gamma ratios), and a rounding allowance for the summation
    err = (
        t_next / (6.0 * max(k_last, 1))
        + 0.25 * tail / max(k_last, 1) ** 2
        + 50.0 * np.finfo(float).eps * total
    )
    return Hyp3F2Result(value=total + tail, error_bound=err, terms=k_next)


class ULimit(NamedTuple):
    regime: str
    normalizer: str
    constant: float


def u_limit(r: float) -> ULimit:
    """Limiting behaviour of u_{n-1}: the normalizer and its constant.

    r > 1/2: u_{n-1}/n^(2r-1) -> Gamma(2-r)^2/(2r-1);
    r = 1/2: u_{n-1}/log n -> pi/4;
    r < 1/2: u_{n-1} -> 3F2(1,1,1; 2-r, 2-r; 1).
    """
    _check_r(r)
    if r > 0.5 + CRITICAL_TOL:
        const = math.exp(2.0 * gammaln(2.0 - r)) / (2.0 * r - 1.0)
        return ULimit("power", "n^(2r-1)", const)
    if abs(r - 0.5) <= CRITICAL_TOL:
        return ULimit("log", "log n", math.pi / 4.0)
    return ULimit("finite", "1", hyp3f2_unit(r).value)


def limit_moment(r: float, m: int) -> float:
    """m-th moment of the limit of the normalized move count (r < 1/2):
    m! Gamma(2-r)^m / Gamma(m - m r + 1)."""
    if not 0.0 <= r < 0.5:
        raise DomainError(f"limit moments require 0 <= r < 1/2, got r={r}")
    if m < 1:
        raise ValueError(f"moment order must be >= 1, got {m}")
    return math.exp(
        gammaln(m + 1.0) + m * gammaln(2.0 - r) - gammaln(m - m * r + 1.0)
    )


# ---------------------------------------------------------------------------
# regime constants of the random-step-size walk
# ---------------------------------------------------------------------------

def memory_exponent(d: int, p: float) -> float:
    """gamma = (2dp - 1) / (2d - 1), the growth exponent of the position."""
    return (2 * d * p - 1.0) / (2 * d - 1.0)


@dataclass(frozen=True)
class RegimeConstants:
    """Constants quoted by the limit theorems; None where undefined."""

    gamma: float
    p_critical: float
    lil_bound_steps: float | None = None  # needs p < (2d+1)/4d and size moments
    lil_bound_stops: float | None = None  # needs r > 1/2
    clt_var_moves: float | None = None  # b(1-b)
    qsl_limit_steps: float | None = None  # eta^2 / d


def lil_bound_steps(d: int, p: float, mu: float, eta_sq: float) -> float:
    """Iterated-logarithm envelope of the position for p below critical:
    eta sqrt(d) + sqrt(mu^2 (2d-1) / (1 + 2d(1-2p)))."""
    if p >= steps_critical_p(d) - CRITICAL_TOL:
        raise DomainError(
            f"the sqrt(2n log log n) position bound needs p < (2d+1)/4d = {steps_critical_p(d)}"
        )
    return math.sqrt(eta_sq) * math.sqrt(d) + math.sqrt(
        mu**2 * (2 * d - 1) / (1.0 + 2 * d * (1.0 - 2.0 * p))
    )


def lil_bound_stops(r: float) -> float:
    """Iterated-logarithm envelope 1/sqrt(2r-1) of the move count, r > 1/2."""
    if r <= 0.5 + CRITICAL_TOL:
        raise DomainError(f"the stops iterated-logarithm bound needs r > 1/2, got r={r}")
    return 1.0 / math.sqrt(2.0 * r - 1.0)


def regime_constants(
    d: int, p: float, step_model: StepSizeModel | None = None, r: float = 0.0
) -> RegimeConstants:
    gamma = memory_exponent(d, p)
    p_c = steps_critical_p(d)
    lil_steps = None
    clt_var = None
    qsl_lim = None
    if step_model is not None:
        if p < p_c - CRITICAL_TOL:
            lil_steps = lil_bound_steps(d, p, step_model.mu, step_model.eta_sq)
        clt_var = step_model.b * (1.0 - step_model.b)
        qsl_lim = step_model.eta_sq / d
    lil_stops = lil_bound_stops(r) if r > 0.5 + CRITICAL_TOL else None
    return RegimeConstants(
        gamma=gamma,
        p_critical=p_c,
        lil_bound_steps=lil_steps,
        lil_bound_stops=lil_stops,
        clt_var_moves=clt_var,
        qsl_limit_steps=qsl_lim,
    )


# ---------------------------------------------------------------------------
# martingale transforms of traces
# ---------------------------------------------------------------------------

MULTIPLICATIVE_MOVES = "multiplicative-moves"
CENTERED_MOVES = "centered-moves"
POSITION = "position"
SERIES_KINDS = (MULTIPLICATIVE_MOVES, CENTERED_MOVES, POSITION)


@dataclass(frozen=True)
class MartingaleSeries:
    """A martingale evaluated at checkpoints.

    multiplicative-moves: moves_k / a_k (stops variant, parameter r);
    centered-moves: moves_k - (k-1)(1-b) (random steps, parameter b);
    position: S_k - mu W_k, a d-vector per checkpoint (random steps).
    """

    kind: str
    checkpoints: np.ndarray
    values: np.ndarray  # (C,) scalar kinds, (C, d) for position
    params: dict

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 2


def multiplicative_series(checkpoints, moves, r: float) -> MartingaleSeries:
    cps = np.asarray(checkpoints, dtype=np.int64)
    a = expected_moves(r, cps)  # a_k equals the gamma-ratio closed form
    return MartingaleSeries(
        MULTIPLICATIVE_MOVES, cps, np.asarray(moves, dtype=np.float64) / a, {"r": r}
    )


def centered_moves_series(checkpoints, moves, b: float) -> MartingaleSeries:
    cps = np.asarray(checkpoints, dtype=np.int64)
    vals = np.asarray(moves, dtype=np.float64) - (cps - 1) * (1.0 - b)
    return MartingaleSeries(CENTERED_MOVES, cps, vals, {"b": b})


def position_series(checkpoints, s, w, mu: float) -> MartingaleSeries:
    cps = np.asarray(checkpoints, dtype=np.int64)
    vals = np.asarray(s, dtype=np.float64) - mu * np.asarray(w, dtype=np.float64)
    return MartingaleSeries(POSITION, cps, vals, {"mu": mu})


def martingale_transform(trace: WalkTrace, kind: str, *, r=None, b=None, mu=None) -> MartingaleSeries:
    """Evaluate one of the three martingales along a trace's checkpoints."""
    if kind == MULTIPLICATIVE_MOVES:
        if trace.variant != STOPS:
            raise ValueError("multiplicative-moves applies to the stops variant")
        if r is None:
            raise ValueError("multiplicative-moves needs the stop probability r")
        return multiplicative_series(trace.checkpoints, trace.moves, r)
    if kind == CENTERED_MOVES:
        if trace.variant != RANDOM_STEPS:
            raise ValueError("centered-moves applies to the random-steps variant")
        if b is None:
            raise ValueError("centered-moves needs the zero mass b")
        return centered_moves_series(trace.checkpoints, trace.moves, b)
    if kind == POSITION:
        if trace.variant != RANDOM_STEPS:
            raise ValueError("the position martingale applies to the random-steps variant")
        if mu is None:
            raise ValueError("the position martingale needs the mean size mu")
        return position_series(trace.checkpoints, trace.position_real, trace.position_int, mu)
    raise ValueError(f"unknown martingale kind {kind!r}")


def trace_variation(sizes: StepSizeModel, n: int) -> float:
    """Trace of the predictable square variation of the position martingale:
    eta1^2 + (mu - mu1)^2 + (n-1) eta^2."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sizes.eta1_sq + (sizes.mu - sizes.mu1) ** 2 + (n - 1) * sizes.eta_sq


def conditional_step_covariance(sigma_diag, n: int, d: int, p: float) -> np.ndarray:
    """Conditional covariance of the next unit step given the past:
    (gamma/n) diag(sigma) + ((1-gamma)/d) I."""
    sig = np.asarray(sigma_diag, dtype=np.float64)
    if sig.shape != (d,):
        raise ValueError(f"sigma_diag must have shape ({d},)")
    if np.any(sig < 0) or np.any(sig > n):
        raise ValueError("sigma_diag entries must lie in [0, n]")
    gamma = memory_exponent(d, p)
    return (gamma / n) * np.diag(sig) + ((1.0 - gamma) / d) * np.eye(d)


# ---------------------------------------------------------------------------
# path statistics for the quadratic strong law and the iterated logarithm
# ---------------------------------------------------------------------------

def qsl_statistic(series: MartingaleSeries, up_to: int):
    """Cesaro statistic (1/log(n+1)) sum_{k<=n} value_k^2 / (k(k+1)).

    Needs dense checkpoints 1..up_to.  For the position martingale the
    squares become outer products and the result is a d x d matrix.
    """
    n = int(up_to)
    if n < 1:
        raise ValueError("up_to must be >= 1")
    cps = series.checkpoints
    if len(cps) < n or not np.array_equal(cps[:n], np.arange(1, n + 1)):
        raise ValueError("the quadratic-strong-law statistic needs dense checkpoints 1..n")
    k = np.arange(1, n + 1, dtype=np.float64)
    wts = 1.0 / (k * (k + 1.0))
    vals = series.values[:n]
    if series.is_vector:
        outer = np.einsum("k,ki,kj->ij", wts, vals, vals)
        return outer / math.log(n + 1.0)
    return float(np.sum(wts * vals**2) / math.log(n + 1.0))


LIL_STOPS_SUBCRITICAL = "stops-subcritical"
LIL_STOPS_CRITICAL = "stops-critical"
LIL_MOVES = "moves"


class LilPath(NamedTuple):
    """Normalized values over valid indices, with their running supremum."""

    indices: np.ndarray
    values: np.ndarray
    running_sup: np.ndarray

    @property
    def sup(self) -> float:
        return float(self.running_sup[-1])


def _lil_start(n: int, nested: int) -> int:
    """First index >= 10 whose innermost nested log exceeds 0.1."""
    k = np.arange(10, n + 1, dtype=np.float64)
    inner = np.log(k)
    for _ in range(nested - 1):
        inner = np.log(inner)
    ok = np.nonzero(inner > 0.1)[0]
    if ok.size == 0:
        raise ValueError(f"path too short for the iterated-logarithm normalizer (n={n})")
    return 10 + int(ok[0])


def lil_statistic(moves, variant: str, *, r: float | None = None, b: float | None = None) -> LilPath:
    """Normalized path statistic of the relevant iterated-logarithm theorem.

    moves is the dense move-count series (index k = 1..n).  Variants:
    stops-subcritical (r > 1/2): Z*_k / sqrt(2 k log log k);
    stops-critical (r = 1/2):    Z*_k / sqrt(2 k log k log log log k);
    moves (random steps):        |moves_k - (k-1)(1-b)| / sqrt(2 k log log k).

    Indices start at the first k >= 10 where the innermost nested logarithm
    exceeds 0.1; the theorems constrain nothing below that.
    """
    z = np.asarray(moves, dtype=np.float64)
    n = len(z)
    if variant == LIL_STOPS_SUBCRITICAL:
        if r is None or r <= 0.5 + CRITICAL_TOL:
            raise ValueError("stops-subcritical normalizer needs r > 1/2")
        k0 = _lil_start(n, 2)
        k = np.arange(k0, n + 1, dtype=np.float64)
        numer = z[k0 - 1 :]
        denom = np.sqrt(2.0 * k * np.log(np.log(k)))
    elif variant == LIL_STOPS_CRITICAL:
        if r is None or abs(r - 0.5) > CRITICAL_TOL:
            raise ValueError("stops-critical normalizer needs r = 1/2")
        k0 = _lil_start(n, 3)
        k = np.arange(k0, n + 1, dtype=np.float64)
        numer = z[k0 - 1 :]
        denom = np.sqrt(2.0 * k * np.log(k) * np.log(np.log(np.log(k))))
    elif variant == LIL_MOVES:
        if b is None:
            raise ValueError("moves normalizer needs the zero mass b")
        k0 = _lil_start(n, 2)
        k = np.arange(k0, n + 1, dtype=np.float64)
        numer = np.abs(z[k0 - 1 :] - (k - 1.0) * (1.0 - b))
        denom = np.sqrt(2.0 * k * np.log(np.log(k)))
    else:
        raise ValueError(f"unknown iterated-logarithm variant {variant!r}")
    vals = numer / denom
    return LilPath(
        indices=np.arange(k0, n + 1, dtype=np.int64),
        values=vals,
        running_sup=np.maximum.accumulate(vals),
    )
