"""Result persistence: CSV traces/summaries, JSON reports, run manifests.

Floating-point values are written with 17 significant digits so a CSV round-
trips exactly; a RunManifest records the config, seed, version and sha256
digests of every output file, which makes a rerun byte-comparable.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .engine import WalkTrace
from .ensemble import EnsembleConfig, EnsembleSummary

FLOAT_FMT = "%.17g"


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % v
    return str(v)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_trace_csv(trace: WalkTrace, path) -> Path:
    """One row per checkpoint: checkpoint, moves, W_1..W_d, S_1..S_d, sigma_1..sigma_d."""
    path = Path(path)
    d = trace.d
    header = (
        ["checkpoint", "moves"]
        + [f"W_{i}" for i in range(1, d + 1)]
        + [f"S_{i}" for i in range(1, d + 1)]
        + [f"sigma_{i}" for i in range(1, d + 1)]
    )
    lines = [",".join(header)]
    for j, cp in enumerate(trace.checkpoints):
        row = [int(cp), int(trace.moves[j])]
        row += [int(x) for x in trace.position_int[j]]
        row += [float(x) for x in trace.position_real[j]]
        row += [int(x) for x in trace.sigma_diag[j]]
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_summary_csv(summary: EnsembleSummary, path) -> Path:
    """Per-checkpoint cross-replica means and variances of every statistic."""
    path = Path(path)
    d = summary.config.params.d
    stats = ["moves", "position_int", "position_real", "sigma_diag"]
    header = ["checkpoint"]
    for stat in stats:
        if stat == "moves":
            header += ["moves_mean", "moves_var"]
        else:
            header += [f"{stat}_{i}_mean" for i in range(1, d + 1)]
            header += [f"{stat}_{i}_var" for i in range(1, d + 1)]
    for kind in summary.martingales:
        arr = summary.martingales[kind]
        width = arr.shape[2] if arr.ndim == 3 else 1
        if width == 1:
            header += [f"{kind}_mean", f"{kind}_var"]
        else:
            header += [f"{kind}_{i}_mean" for i in range(1, width + 1)]
            header += [f"{kind}_{i}_var" for i in range(1, width + 1)]

    means = {s: summary.mean(s) for s in stats}
    vars_ = {s: summary.variance(s) for s in stats}
    mart_means = {k: np.mean(v, axis=0) for k, v in summary.martingales.items()}
    mart_vars = {k: np.var(v, axis=0, ddof=1) for k, v in summary.martingales.items()}

    lines = [",".join(header)]
    for j, cp in enumerate(summary.checkpoints):
        row = [int(cp)]
        row += [float(means["moves"][j]), float(vars_["moves"][j])]
        for stat in stats[1:]:
            row += [float(x) for x in np.atleast_1d(means[stat][j])]
            row += [float(x) for x in np.atleast_1d(vars_[stat][j])]
        for kind in summary.martingales:
            row += [float(x) for x in np.atleast_1d(mart_means[kind][j])]
            row += [float(x) for x in np.atleast_1d(mart_vars[kind][j])]
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_summary_json(summary: EnsembleSummary, path) -> Path:
    """Config echo plus per-checkpoint cross-replica means and variances."""
    path = Path(path)
    stats = ["moves", "position_int", "position_real", "sigma_diag"]
    doc = {
        "tool": {"name": "merw", "version": __version__},
        "config": summary.config.to_dict(),
        "replicas": summary.replicas,
        "checkpoints": [int(c) for c in summary.checkpoints],
        "mean": {s: summary.mean(s).tolist() for s in stats},
        "variance": {s: summary.variance(s).tolist() for s in stats},
        "martingales": {
            kind: {
                "mean": np.mean(values, axis=0).tolist(),
                "variance": np.var(values, axis=0, ddof=1).tolist(),
            }
            for kind, values in summary.martingales.items()
        },
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_reports_json(reports, path) -> Path:
    path = Path(path)
    doc = {
        "tool": {"name": "merw", "version": __version__},
        "reports": [r.to_dict() for r in reports],
        "hard_failures": sum(r.hard_failure() for r in reports),
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_manifest(
    config: EnsembleConfig, outputs: list, started: float, finished: float, path
) -> Path:
    """Manifest: version + config + seed + timestamps + output digests.

    The digests (not the timestamps) are the reproducibility contract: a
    rerun from the same config must reproduce every output byte-for-byte.
    """
    path = Path(path)
    doc = {
        "tool": {"name": "merw", "version": __version__},
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "workers": config.parallelism,
        "started_utc": _dt.datetime.fromtimestamp(started, _dt.timezone.utc).isoformat(),
        "finished_utc": _dt.datetime.fromtimestamp(finished, _dt.timezone.utc).isoformat(),
        "outputs": {Path(p).name: sha256_file(p) for p in outputs},
        "csv_columns_version": 1,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def load_config_file(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def apply_overrides(spec: dict, overrides: list[str]) -> dict:
    """Apply dotted-path overrides like walk.r=0.3 to a config dict."""
    spec = json.loads(json.dumps(spec))  # deep copy
    for item in overrides:
        path, _, raw = item.partition("=")
        if not _:
            raise ValueError(f"override {item!r} is not of the form dotted.path=value")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = spec
        keys = path.strip().split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value
    return spec
