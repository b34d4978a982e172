"""Command-line entry points: merw simulate | expect | verify.

Exit codes: 0 ok, 1 hard test failure, 2 usage/config error, 3 runtime
failure, 4 domain error.  The MERW_THREADS environment variable caps worker
counts everywhere.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from . import __version__, analytics, io as merw_io
from .analytics import DomainError
from .core import STOPS
from .ensemble import config_from_dict, run_ensemble, seed_stream
from .engine import simulate_random_steps, simulate_stops
from .sizes import parse_distribution, StepSizeModel
from .suites import SUITE_NAMES, clt_calibration, run_suite

EXIT_TEST_FAILURE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_DOMAIN = 4


@click.group()
@click.version_option(version=__version__, prog_name="merw")
def main():
    """Elephant-walk simulation and verification laboratory."""


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--set", "overrides", multiple=True, metavar="PATH=VALUE",
              help="Override a config entry by dotted path, e.g. --set walk.r=0.3")
@click.option("--out", type=click.Path(file_okay=False), default="merw-out",
              help="Output directory (created if missing).")
def simulate(config_file, overrides, out):
    """Run the ensemble described by a JSON config; write CSV + manifest."""
    try:
        spec = merw_io.load_config_file(config_file)
        if "config" in spec and "walk" not in spec:
            spec = spec["config"]  # a manifest re-runs its own config
        spec = merw_io.apply_overrides(spec, list(overrides))
        cfg = config_from_dict(spec)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        click.echo(f"invalid config: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        started = time.time()
        outputs = []
        if cfg.replicas == 1:
            rng = seed_stream(cfg.master_seed, 0)
            cps = cfg.resolved_checkpoints()
            if cfg.variant == STOPS:
                trace = simulate_stops(cfg.params, cfg.n, rng, checkpoints=cps)
            else:
                trace = simulate_random_steps(cfg.params, cfg.sizes, cfg.n, rng, checkpoints=cps)
            outputs.append(merw_io.write_trace_csv(trace, outdir / "trace.csv"))
        else:
            summary = run_ensemble(cfg)
            outputs.append(merw_io.write_summary_csv(summary, outdir / "summary.csv"))
            outputs.append(merw_io.write_summary_json(summary, outdir / "summary.json"))
        merw_io.write_manifest(cfg, outputs, started, time.time(), outdir / "manifest.json")
        click.echo(f"wrote {len(outputs)} file(s) + manifest.json to {outdir}")
    except Exception as exc:  # noqa: BLE001
        click.echo(f"runtime failure: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)


def _expect_rows(kind, opts):
    """Evaluate one expect query; returns [(name, value, citation), ...]."""
    r, n, d, p, m = opts["r"], opts["n"], opts["d"], opts["p"], opts["m"]
    if kind == "moves":
        _need(r is not None and n is not None, "--moves needs -r and -n")
        return [("expected_moves", analytics.expected_moves(r, n), "expected-moves-gamma-ratio")]
    if kind == "ulimit":
        _need(r is not None, "--ulimit needs -r")
        lim = analytics.u_limit(r)
        return [
            ("regime", lim.regime, "u-series-limit"),
            ("normalizer", lim.normalizer, "u-series-limit"),
            ("constant", lim.constant, "u-series-limit"),
        ]
    if kind == "hyp3f2":
        _need(r is not None, "--hyp3f2 needs -r")
        res = analytics.hyp3f2_unit(r)
        return [
            ("value", res.value, "hyp3f2-unit-argument"),
            ("error_bound", res.error_bound, "hyp3f2-unit-argument"),
        ]
    if kind == "moment":
        _need(r is not None and m is not None, "--moment needs -r and -m")
        return [("limit_moment", analytics.limit_moment(r, m), "limit-moments-normalized-moves")]
    if kind == "gamma":
        _need(d is not None and p is not None, "--gamma needs -d and -p")
        return [("gamma", analytics.memory_exponent(d, p), "memory-exponent")]
    if kind == "constants":
        _need(d is not None and p is not None, "--constants needs -d and -p")
        sizes = StepSizeModel(later=parse_distribution(opts["sizes"])) if opts["sizes"] else None
        c = analytics.regime_constants(d, p, sizes, r or 0.0)
        rows = [
            ("gamma", c.gamma, "memory-exponent"),
            ("p_critical", c.p_critical, "steps-critical-memory"),
        ]
        for name, key in [
            ("lil_bound_steps", "lil-steps-envelope"),
            ("lil_bound_stops", "lil-stops-envelope"),
            ("clt_var_moves", "clt-moves-normal"),
            ("qsl_limit_steps", "qsl-position-limit"),
        ]:
            v = getattr(c, name)
            if v is not None:
                rows.append((name, v, key))
        return rows
    if kind == "lil-stops":
        _need(r is not None, "--lil-stops needs -r")
        return [("lil_bound_stops", analytics.lil_bound_stops(r), "lil-stops-envelope")]
    if kind == "variation":
        _need(n is not None and opts["sizes"] is not None, "--variation needs -n and --sizes")
        sizes = StepSizeModel(later=parse_distribution(opts["sizes"]))
        return [("trace_variation", analytics.trace_variation(sizes, n), "position-variation-trace")]
    raise AssertionError(kind)


class _Usage(Exception):
    pass


def _need(cond, message):
    if not cond:
        raise _Usage(message)


@main.command()
@click.option("--moves", "query", flag_value="moves", help="Expected move count (needs -r, -n).")
@click.option("--ulimit", "query", flag_value="ulimit", help="Limit of the u-series (needs -r).")
@click.option("--hyp3f2", "query", flag_value="hyp3f2", help="3F2(1,1,1;2-r,2-r;1) (needs -r).")
@click.option("--moment", "query", flag_value="moment", help="Limit moment (needs -r, -m).")
@click.option("--gamma", "query", flag_value="gamma", help="Memory exponent (needs -d, -p).")
@click.option("--constants", "query", flag_value="constants",
              help="All regime constants (needs -d, -p; optional -r, --sizes).")
@click.option("--lil-stops", "query", flag_value="lil-stops",
              help="Iterated-logarithm bound of the stops move count (needs -r).")
@click.option("--variation", "query", flag_value="variation",
              help="Variation budget of the position martingale (needs -n, --sizes).")
@click.option("-r", type=float, default=None, help="Stop probability.")
@click.option("-n", type=int, default=None, help="Path length.")
@click.option("-d", type=int, default=None, help="Dimension.")
@click.option("-p", type=float, default=None, help="Memory parameter.")
@click.option("-m", type=int, default=None, help="Moment order.")
@click.option("--sizes", type=str, default=None,
              help="Step-size law, e.g. 'zero-inflated-point:b=0.5,value=1'.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
def expect(query, r, n, d, p, m, sizes, as_json):
    """Print closed-form quantities with their citation keys."""
    if query is None:
        click.echo("no query selected; pass one of --moves/--ulimit/--hyp3f2/"
                   "--moment/--gamma/--constants/--lil-stops/--variation", err=True)
        sys.exit(EXIT_CONFIG)
    opts = {"r": r, "n": n, "d": d, "p": p, "m": m, "sizes": sizes}
    try:
        rows = _expect_rows(query, opts)
    except _Usage as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_CONFIG)
    except DomainError as exc:
        click.echo(f"domain error: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    except ValueError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if as_json:
        click.echo(json.dumps(
            {name: {"value": value, "citation": cite} for name, value, cite in rows},
            indent=2, sort_keys=True,
        ))
    else:
        for name, value, cite in rows:
            shown = f"{value:.12g}" if isinstance(value, float) else value
            click.echo(f"{name:>18}  {shown}  [{cite}]")


@main.command()
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@click.option("--fresh-seed", is_flag=True, help="Draw new seeds instead of the shipped ones.")
@click.option("--out", type=click.Path(file_okay=False), default="merw-reports",
              help="Directory for the TestReport JSON.")
@click.option("--workers", type=int, default=None, help="Worker threads (capped by MERW_THREADS).")
@click.option("--scale", type=float, default=1.0,
              help="Replica-count scale for quick smoke runs (verdicts at scale < 1 are advisory).")
@click.option("--with-calibration", is_flag=True,
              help="Also run the CLT calibration on exact-null synthetic data.")
def verify(suite, fresh_seed, out, workers, scale, with_calibration):
    """Run a verification suite; exit 0 iff every hard test passes."""
    try:
        reports = run_suite(suite, fresh_seed=fresh_seed, parallelism=workers, scale=scale)
        if with_calibration and suite in ("clt", "all"):
            passes, reps = clt_calibration(master_seed=0 if fresh_seed else 20260309)
            from .stattests import TestReport, PASS, FAIL

            reports.append(TestReport(
                name="clt-calibration",
                citation="clt-moves-normal",
                null_value=0.97,
                observed=passes / reps,
                error_scale=None,
                rule="exact-null synthetic data passes in >= 97% of repetitions",
                verdict=PASS if passes >= 0.97 * reps else FAIL,
                details={"passes": passes, "repetitions": reps},
            ))
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = merw_io.write_reports_json(reports, outdir / f"{suite}-reports.json")
        hard_fail = False
        for rep in reports:
            tag = " (advisory)" if rep.advisory else ""
            if scale != 1.0:
                tag += f" (scale={scale:g})"
            click.echo(f"{rep.verdict.upper():>12}  {rep.name}{tag}  [{rep.citation}]")
            if rep.hard_failure():
                hard_fail = True
        click.echo(f"reports written to {path}")
        if hard_fail and scale == 1.0:
            sys.exit(EXIT_TEST_FAILURE)
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001
        click.echo(f"runtime failure: {exc}", err=True)
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    main()
