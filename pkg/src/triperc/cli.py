"""Command-line surface: experiments, enumeration, sampling, exploration.

Output is CSV or JSON (UTF-8, LF, floats with 17 significant digits); every
run also emits a manifest with the full parameter set, seed, engine version,
wall-clock duration and a digest of the output. Exit code 0 means PASS or
complete, 1 a FAIL verdict, 2 a usage error.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction

import click

from . import __version__
from .events import CrossingEvent
from .experiments import (
    Report,
    annulus_check,
    crossing_experiment,
    decay_check,
    duality_mass_check,
    fkg_mc_check,
    overlapping_crossings_pair,
    pc_estimate,
    pivotal_scaling,
    rsw_check,
    sweep,
)
from .exploration import LazySource, explore
from .geometry import Axis, Color, RectDomain, dump_config
from .oracle import enumerate_prob, sigma_monotonicity, verify_increasing, verify_robust
from .rng import SamplerKey, color_grid, diag_grid

_COLORS = {"red": Color.RED, "blue": Color.BLUE}
_AXES = {"lr": Axis.LEFT_RIGHT, "tb": Axis.TOP_BOTTOM}


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _serialize(rows: list[dict], fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(rows, indent=2, default=str) + "\n").encode()
    buf = io.StringIO()
    if rows:
        cols = list(rows[0].keys())
        buf.write(",".join(cols) + "\n")
        for row in rows:
            buf.write(",".join(_fmt_value(row[c]) for c in cols) + "\n")
    return buf.getvalue().encode()


def _emit(
    data: bytes,
    out: str | None,
    command: str,
    params: dict,
    seed: int | None,
    started: float,
) -> None:
    manifest = {
        "command": command,
        "params": {k: str(v) if isinstance(v, tuple) else v for k, v in params.items()},
        "seed": seed,
        "engine_version": __version__,
        "duration_seconds": time.perf_counter() - started,
        "output_digest": "sha256:" + hashlib.sha256(data).hexdigest(),
    }
    if out:
        tmp = out + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, out)
        with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(data.decode())
        sys.stderr.write(json.dumps(manifest) + "\n")


def _finish(report: Report, fmt: str, out: str | None, command: str, started: float):
    rows = [dict(r, verdict=report.verdict) for r in report.rows]
    _emit(
        _serialize(rows, fmt),
        out,
        command,
        report.params,
        report.params.get("seed"),
        started,
    )
    if report.details:
        sys.stderr.write(report.details)
    if report.verdict == "FAIL":
        sys.exit(1)


def _int_list(_ctx, _param, value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v]
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _float_list(_ctx, _param, value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v]
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _domain(cells_w, cells_h, n, aspect) -> RectDomain:
    if n is not None:
        return RectDomain(aspect * n, n)
    if cells_w is None or cells_h is None:
        raise click.UsageError("provide --cells-w/--cells-h or --n (with --aspect)")
    return RectDomain(cells_w, cells_h)


def _common(fn):
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--workers", type=int, default=1, show_default=True)(fn)
    fn = click.option("--out", type=click.Path(), default=None)(fn)
    fn = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
        show_default=True,
    )(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Percolation experiments on the randomly triangulated square lattice."""


@main.command()
@click.option("--cells-w", type=int, default=None)
@click.option("--cells-h", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--aspect", type=int, default=2, show_default=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--color", type=click.Choice(list(_COLORS)), default="red")
@click.option("--axis", type=click.Choice(list(_AXES)), default="lr")
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option(
    "--method", type=click.Choice(["cluster", "explore"]), default="cluster"
)
@_common
def crossing(cells_w, cells_h, n, aspect, p, color, axis, reps, method, fmt, out, workers, seed):
    """Monte Carlo crossing probability of one rectangle."""
    started = time.perf_counter()
    d = _domain(cells_w, cells_h, n, aspect)
    try:
        est = crossing_experiment(
            d, p, _COLORS[color], _AXES[axis], reps, seed, method=method,
            workers=workers,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = [
        {
            "cells_w": d.cells_w,
            "cells_h": d.cells_h,
            "p": p,
            "color": color,
            "axis": axis,
            "estimate": est.value,
            "stderr": est.stderr,
            "reps": est.reps,
        }
    ]
    params = dict(rows[0], method=method, seed=seed)
    _emit(_serialize(rows, fmt), out, "crossing", params, seed, started)


@main.command()
@click.option("--p", "p_values", default="0.4,0.45,0.5,0.55,0.6", callback=_float_list)
@click.option("--n", "n_values", default="8,16", callback=_int_list)
@click.option("--aspect", type=int, default=2, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@_common
def sweep_cmd(p_values, n_values, aspect, reps, fmt, out, workers, seed):
    """Crossing-probability sweep over a (p, n) grid."""
    started = time.perf_counter()
    rows = sweep(p_values, n_values, aspect, reps, seed, workers=workers)
    params = {"p": p_values, "n": n_values, "aspect": aspect, "reps": reps, "seed": seed}
    _emit(_serialize(rows, fmt), out, "sweep", params, seed, started)


main.add_command(sweep_cmd, name="sweep")


@main.command()
@click.option("--n", "n_values", default="8,16,32", callback=_int_list)
@click.option("--aspect", type=int, default=2, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@_common
def rsw(n_values, aspect, reps, fmt, out, workers, seed):
    """Long-way crossing at p=1/2 against the uniform 1/16 bound."""
    started = time.perf_counter()
    report = rsw_check(n_values, reps, seed, aspect=aspect, workers=workers)
    _finish(report, fmt, out, "rsw", started)


@main.command()
@click.option("--n", "n_values", default="1,2,4", callback=_int_list)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--delta0", type=float, default=0.01, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@_common
def annulus(n_values, p, delta0, reps, fmt, out, workers, seed):
    """Red circuit probability in 4n/6n annuli."""
    started = time.perf_counter()
    report = annulus_check(n_values, reps, seed, p=p, delta0=delta0, workers=workers)
    _finish(report, fmt, out, "annulus", started)


@main.command()
@click.option("--n", "n_values", default="8,16,32", callback=_int_list)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--reps", type=int, default=2_000, show_default=True)
@_common
def pivotal(n_values, p, reps, fmt, out, workers, seed):
    """Conditional pivotal means for the blue short-way crossing."""
    started = time.perf_counter()
    report = pivotal_scaling(n_values, p, reps, seed)
    _finish(report, fmt, out, "pivotal", started)


@main.command()
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--k", "k_values", default="3,4,5,6", callback=_int_list)
@click.option("--color", type=click.Choice(list(_COLORS)), default="blue")
@click.option("--reps", type=int, default=10_000, show_default=True)
@_common
def decay(epsilon, k_values, color, reps, fmt, out, workers, seed):
    """Subcritical crossing decay over dyadic rectangle sizes."""
    started = time.perf_counter()
    report = decay_check(
        epsilon, k_values, reps, seed, color=_COLORS[color], workers=workers
    )
    _finish(report, fmt, out, "decay", started)


@main.command()
@click.option("--n", type=int, default=32, show_default=True)
@click.option("--reps", type=int, default=20_000, show_default=True)
@click.option("--tol", type=float, default=0.01, show_default=True)
@_common
def pc(n, reps, tol, fmt, out, workers, seed):
    """Bisection estimate of the critical probability on an n x n square."""
    started = time.perf_counter()
    est, rows = pc_estimate(n, reps, tol, seed, workers=workers)
    rows.append(
        {
            "probe": "final",
            "p": est.value,
            "estimate": est.value,
            "stderr": est.stderr,
        }
    )
    params = {"n": n, "reps": reps, "tol": tol, "seed": seed}
    _emit(_serialize(rows, fmt), out, "pc", params, seed, started)


@main.command()
@click.option("--n", type=int, default=16, show_default=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@_common
def fkg(n, p, reps, fmt, out, workers, seed):
    """Positive-correlation margin of two overlapping red crossings."""
    started = time.perf_counter()
    e1, e2, s1, s2 = overlapping_crossings_pair(n)
    report = fkg_mc_check(e1, e2, s1, s2, p, reps, seed)
    _finish(report, fmt, out, "fkg", started)


@main.command()
@click.option("--sizes", default="4x2,16x8,64x32", show_default=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--reps", type=int, default=30_000, show_default=True)
@_common
def duality(sizes, p, reps, fmt, out, workers, seed):
    """Mass-check the crossing XOR duality on sampled configurations."""
    started = time.perf_counter()
    try:
        parsed = [tuple(int(v) for v in s.split("x")) for s in sizes.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"bad --sizes: {exc}")
    report = duality_mass_check(parsed, reps, seed, p=p, workers=workers)
    _finish(report, fmt, out, "duality", started)


@main.command()
@click.option("--cells-w", type=int, required=True)
@click.option("--cells-h", type=int, required=True)
@click.option("--event", "event_spec", default="crossing:red:lr", show_default=True)
@click.option("--p", "p_str", default="1/2", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0)
def enumerate(cells_w, cells_h, event_spec, p_str, out, seed):
    """Exact probability and verification verdicts by exhaustive enumeration."""
    started = time.perf_counter()
    parts = event_spec.split(":")
    if len(parts) != 3 or parts[0] != "crossing" or parts[1] not in _COLORS or parts[2] not in _AXES:
        raise click.UsageError("--event must look like crossing:{red|blue}:{lr|tb}")
    try:
        p = Fraction(p_str)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"bad --p: {exc}")
    d = RectDomain(cells_w, cells_h)
    e = CrossingEvent(d, _COLORS[parts[1]], _AXES[parts[2]])
    result = enumerate_prob(e, p)
    robust, _ = verify_robust(e)
    increasing, _ = verify_increasing(e)
    doc = {
        "event": result.description,
        "domain": {"cells_w": cells_w, "cells_h": cells_h},
        "p": str(p),
        "probability": f"{result.probability.numerator}/{result.probability.denominator}",
        "support_sites": result.n_support_sites,
        "support_cells": result.n_support_cells,
        "counts_by_red_sites": list(result.counts_by_red),
        "verdicts": {
            "robust": robust,
            "increasing": increasing,
            "sigma_monotonicity": sigma_monotonicity(e).value,
        },
    }
    data = (json.dumps(doc, indent=2) + "\n").encode()
    _emit(data, out, "enumerate", doc["domain"] | {"event": event_spec, "p": str(p)}, seed, started)


@main.command(name="explore")
@click.option("--cells-w", type=int, required=True)
@click.option("--cells-h", type=int, required=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0)
@click.option("--replicate", type=int, default=0)
@click.option("--trace/--no-trace", default=False)
@click.option("--out", type=click.Path(), default=None)
def explore_cmd(cells_w, cells_h, p, seed, replicate, trace, out):
    """Run one interface exploration; optionally emit the step trace."""
    started = time.perf_counter()
    d = RectDomain(cells_w, cells_h)
    src = LazySource(SamplerKey(seed, replicate), p)
    result = explore(d, src, collect_trace=trace)
    lines = [f"exit_side={result.exit_side.value}", f"steps={result.step_count}"]
    lines += list(result.trace)
    data = ("\n".join(lines) + "\n").encode()
    params = {
        "cells_w": cells_w, "cells_h": cells_h, "p": p,
        "replicate": replicate, "trace": trace, "seed": seed,
    }
    _emit(data, out, "explore", params, seed, started)


@main.command()
@click.option("--cells-w", type=int, required=True)
@click.option("--cells-h", type=int, required=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0)
@click.option("--replicate", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def sample(cells_w, cells_h, p, seed, replicate, out):
    """Dump one sampled configuration in the textual format."""
    started = time.perf_counter()
    d = RectDomain(cells_w, cells_h)
    key = SamplerKey(seed, replicate)
    data = dump_config(diag_grid(key, d), color_grid(key, p, d), d).encode()
    params = {
        "cells_w": cells_w, "cells_h": cells_h, "p": p,
        "replicate": replicate, "seed": seed,
    }
    _emit(data, out, "sample", params, seed, started)


if __name__ == "__main__":
    main()
