"""Reproducible parallel ensembles of walk paths.

Every replica owns an independent random stream derived from
(master_seed, replica_index) through a SeedSequence, so a replica's trace
does not depend on which worker ran it or on the worker count.  Results are
stored in replica order and reduced with numpy's pairwise summation, making
summaries bit-identical across parallelism levels.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytics
from .core import RANDOM_STEPS, STOPS, VARIANTS, WalkParams
from .engine import default_checkpoints, simulate_random_steps, simulate_stops
from .sizes import StepSizeModel


def seed_stream(master_seed: int, replica_index: int) -> np.random.Generator:
    """Independent per-replica generator.

    The child state is SeedSequence's 128-bit hash mix of the master seed
    with the replica index used as a spawn key, feeding a PCG64 generator;
    identical inputs give identical streams, distinct indices give
    statistically independent ones.
    """
    if replica_index < 0:
        raise ValueError(f"replica index must be >= 0, got {replica_index}")
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(replica_index),))
    return np.random.Generator(np.random.PCG64(ss))


class ReplicaError(RuntimeError):
    """A walk-engine failure, tagged with the replica that hit it."""

    def __init__(self, replica_index: int, cause: BaseException):
        super().__init__(f"replica {replica_index} failed: {cause}")
        self.replica_index = replica_index
        self.cause = cause


def resolve_parallelism(requested: int | None = None) -> int:
    """Worker count: the requested value, capped by MERW_THREADS if set."""
    n = requested if requested and requested >= 1 else min(4, os.cpu_count() or 1)
    cap = os.environ.get("MERW_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def parallel_map_indexed(fn, count: int, parallelism: int | None = None) -> list:
    """fn(i) for i in 0..count-1 on a thread pool; results in index order.

    Exceptions are re-raised as ReplicaError carrying the index.
    """
    workers = resolve_parallelism(parallelism)
    results = [None] * count

    def run_range(lo, hi):
        for i in range(lo, hi):
            try:
                results[i] = fn(i)
            except Exception as exc:  # noqa: BLE001 - tagged and re-raised
                raise ReplicaError(i, exc) from exc

    if workers == 1 or count == 1:
        run_range(0, count)
        return results
    chunk = max(1, -(-count // (workers * 8)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_range, lo, min(lo + chunk, count))
            for lo in range(0, count, chunk)
        ]
        for f in futures:
            f.result()
    return results


@dataclass(frozen=True)
class EnsembleConfig:
    """Everything needed to reproduce an ensemble bit-for-bit."""

    params: WalkParams
    variant: str
    n: int
    replicas: int
    master_seed: int
    sizes: StepSizeModel | None = None  # random-steps only
    checkpoints: tuple | None = None  # default: powers of two plus n
    parallelism: int | None = None  # worker count; never affects results
    martingales: tuple = ()  # series kinds to record per replica

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == RANDOM_STEPS and self.sizes is None:
            raise ValueError("random-steps ensembles need a StepSizeModel")
        if self.variant == STOPS and self.sizes is not None:
            raise ValueError("the stops variant takes no StepSizeModel")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.n < 1:
            raise ValueError("path length must be >= 1")
        for kind in self.martingales:
            if kind not in analytics.SERIES_KINDS:
                raise ValueError(f"unknown martingale kind {kind!r}")

    def resolved_checkpoints(self) -> np.ndarray:
        if self.checkpoints is None:
            return default_checkpoints(self.n)
        return np.unique(np.asarray(self.checkpoints, dtype=np.int64))

    def to_dict(self) -> dict:
        # parallelism is deliberately not echoed: it is an execution hint
        # that never changes results, so config echoes (and the files that
        # embed them) stay identical across worker counts
        d = {
            "walk": {"d": self.params.d, "p": self.params.p, "r": self.params.r},
            "variant": self.variant,
            "n": self.n,
            "replicas": self.replicas,
            "master_seed": self.master_seed,
            "checkpoints": [int(c) for c in self.resolved_checkpoints()],
            "martingales": list(self.martingales),
        }
        if self.sizes is not None:
            d["sizes"] = self.sizes.to_dict()
        return d


def config_from_dict(spec: dict) -> EnsembleConfig:
    from .core import validate_params  # local to avoid import noise at top

    walk = spec["walk"]
    params = validate_params(int(walk["d"]), float(walk["p"]), float(walk.get("r", 0.0)))
    sizes = StepSizeModel.from_dict(spec["sizes"]) if "sizes" in spec else None
    checkpoints = spec.get("checkpoints")
    if isinstance(checkpoints, str):
        if checkpoints == "dense":
            checkpoints = tuple(range(1, int(spec["n"]) + 1))
        elif checkpoints == "pow2":
            checkpoints = None
        else:
            raise ValueError(f"unknown checkpoint preset {checkpoints!r}")
    elif checkpoints is not None:
        checkpoints = tuple(int(c) for c in checkpoints)
    return EnsembleConfig(
        params=params,
        variant=spec.get("variant", STOPS),
        n=int(spec["n"]),
        replicas=int(spec["replicas"]),
        master_seed=int(spec["master_seed"]),
        sizes=sizes,
        checkpoints=checkpoints,
        parallelism=spec.get("parallelism"),
        martingales=tuple(spec.get("martingales", ())),
    )


@dataclass
class EnsembleSummary:
    """Cross-replica statistics at each checkpoint.

    Per-replica arrays are kept (replica-major) so tests can recompute any
    verdict; reductions use numpy's deterministic pairwise summation.
    """

    config: EnsembleConfig
    checkpoints: np.ndarray
    replicas: int
    moves: np.ndarray  # (R, C)
    position_int: np.ndarray  # (R, C, d)
    position_real: np.ndarray  # (R, C, d)
    sigma_diag: np.ndarray  # (R, C, d)
    martingales: dict = field(default_factory=dict)  # kind -> (R, C) or (R, C, d)

    def mean(self, stat: str) -> np.ndarray:
        return np.mean(self._array(stat), axis=0)

    def variance(self, stat: str) -> np.ndarray:
        return np.var(self._array(stat), axis=0, ddof=1)

    def covariance(self, stat: str, checkpoint_index: int) -> np.ndarray:
        """d x d cross-replica covariance at one checkpoint, symmetrized."""
        arr = self._array(stat)
        if arr.ndim != 3:
            v = np.var(arr[:, checkpoint_index], ddof=1)
            return np.array([[v]])
        c = np.cov(arr[:, checkpoint_index, :], rowvar=False, ddof=1)
        c = np.atleast_2d(c)
        return (c + c.T) / 2.0

    def _array(self, stat: str) -> np.ndarray:
        if stat in ("moves", "position_int", "position_real", "sigma_diag"):
            return getattr(self, stat)
        if stat in self.martingales:
            return self.martingales[stat]
        raise KeyError(f"unknown statistic {stat!r}")


def _replica_trace(cfg: EnsembleConfig, cps, index: int):
    rng = seed_stream(cfg.master_seed, index)
    if cfg.variant == STOPS:
        return simulate_stops(cfg.params, cfg.n, rng, checkpoints=cps)
    return simulate_random_steps(cfg.params, cfg.sizes, cfg.n, rng, checkpoints=cps)


def run_ensemble(cfg: EnsembleConfig) -> EnsembleSummary:
    """Simulate all replicas and collect per-checkpoint statistics.

    A pure function of the config: workers only decide who computes which
    replica, never the result.
    """
    cps = cfg.resolved_checkpoints()
    R, C, d = cfg.replicas, len(cps), cfg.params.d
    moves = np.empty((R, C), dtype=np.int64)
    w = np.empty((R, C, d), dtype=np.int64)
    s = np.empty((R, C, d), dtype=np.float64)
    sig = np.empty((R, C, d), dtype=np.int64)
    mart = {
        kind: np.empty((R, C, d) if kind == analytics.POSITION else (R, C))
        for kind in cfg.martingales
    }
    mart_kwargs = {
        analytics.MULTIPLICATIVE_MOVES: {"r": cfg.params.r},
        analytics.CENTERED_MOVES: {"b": cfg.sizes.b if cfg.sizes else None},
        analytics.POSITION: {"mu": cfg.sizes.mu if cfg.sizes else None},
    }

    def one(i):
        trace = _replica_trace(cfg, cps, i)
        moves[i] = trace.moves
        w[i] = trace.position_int
        s[i] = trace.position_real
        sig[i] = trace.sigma_diag
        for kind in cfg.martingales:
            series = analytics.martingale_transform(trace, kind, **mart_kwargs[kind])
            mart[kind][i] = series.values

    parallel_map_indexed(one, R, cfg.parallelism)
    return EnsembleSummary(
        config=cfg,
        checkpoints=cps,
        replicas=R,
        moves=moves,
        position_int=w,
        position_real=s,
        sigma_diag=sig,
        martingales=mart,
    )


def map_paths(cfg: EnsembleConfig, path_fn, parallelism: int | None = None) -> list:
    """path_fn(trace) per replica, in replica order.

    For per-path scalar statistics (quadratic strong law, iterated
    logarithm) where keeping dense ensemble arrays would be wasteful.
    """

    def one(i):
        return path_fn(_replica_trace(cfg, cfg.resolved_checkpoints(), i))

    return parallel_map_indexed(one, cfg.replicas, parallelism or cfg.parallelism)


def map_seeded(master_seed: int, count: int, fn, parallelism: int | None = None) -> list:
    """fn(rng) over per-index seed streams, in index order."""

    def one(i):
        return fn(seed_stream(master_seed, i))

    return parallel_map_indexed(one, count, parallelism)
