"""Monte Carlo experiments reproducing the desk-scale claims.

Every experiment is a deterministic function of (seed, parameters): replicate
r of a run draws its configuration from ``SamplerKey(seed, r)`` through the
counter-based sampler, per-replicate outcomes are collected in replicate
order, and the reduction is a single pass over that ordered array. Worker
pools only split the replicate range, so parallel and serial runs emit
byte-identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .connectivity import Annulus, check_duality, has_circuit, has_crossing
from .events import CrossingEvent, Event, subrect_crossing
from .exploration import ExitSide, LazySource, explore
from .geometry import Axis, Color, RectDomain, dump_config
from .oracle import HypothesisError, verify_increasing, verify_robust
from .pivotal import Estimate, conditional_pivotal_mean
from .rng import SamplerKey, color_grid, diag_grid

# one-sided 99% normal quantile, used for every confidence bound
Z99 = 2.3263478740408408

RSW_BOUND = 1.0 / 16.0


@dataclass
class Report:
    name: str
    verdict: str  # PASS | FAIL | INCONCLUSIVE | N/A
    rows: list[dict] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    details: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _binomial_estimate(outcomes: np.ndarray, seed: int) -> Estimate:
    reps = int(outcomes.size)
    value = float(outcomes.mean())
    stderr = float(outcomes.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return Estimate(value=value, stderr=stderr, reps=reps, accepted=reps, seed=seed)


def _chunks(reps: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, reps))
    step = -(-reps // workers)
    return [(lo, min(lo + step, reps)) for lo in range(0, reps, step)]


def _run_chunked(
    chunk_fn: Callable, args: tuple, reps: int, workers: int
) -> np.ndarray:
    """Evaluate per-replicate outcomes, optionally across processes.

    The result is the concatenation in replicate order, so the worker count
    never changes the output.
    """
    spans = _chunks(reps, workers)
    if len(spans) == 1 or workers <= 1:
        parts = [chunk_fn(args, lo, hi) for lo, hi in spans]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(chunk_fn, args, lo, hi) for lo, hi in spans]
            parts = [f.result() for f in futures]
    return np.concatenate(parts)


def _crossing_chunk(args: tuple, lo: int, hi: int) -> np.ndarray:
    cells_w, cells_h, p, color, axis, seed, method, rep_offset = args
    d = RectDomain(cells_w, cells_h)
    out = np.empty(hi - lo, dtype=np.uint8)
    for i, rep in enumerate(range(lo, hi)):
        key = SamplerKey(seed, rep_offset + rep)
        if method == "explore":
            res = explore(d, LazySource(key, p))
            out[i] = res.exit_side == ExitSide.RIGHT
        else:
            omega = diag_grid(key, d)
            sigma = color_grid(key, p, d)
            out[i] = has_crossing(omega, sigma, d, Color(color), Axis(axis))
    return out


def crossing_experiment(
    d: RectDomain,
    p: float,
    color: Color,
    axis: Axis,
    reps: int,
    seed: int,
    method: str = "cluster",
    workers: int = 1,
    rep_offset: int = 0,
) -> Estimate:
    """Estimate the annealed crossing probability.

    ``method='explore'`` decides each replicate with the lazy interface walk
    instead of eager sampling plus clustering; under the shared key the two
    paths give identical per-replicate outcomes (only red left-right supports
    the exploration contract).
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if method not in ("cluster", "explore"):
        raise ValueError(f"unknown method {method!r}")
    if method == "explore" and (color, axis) != (Color.RED, Axis.LEFT_RIGHT):
        raise ValueError("exploration decides red left-right crossings only")
    args = (d.cells_w, d.cells_h, p, int(color), int(axis), seed, method, rep_offset)
    outcomes = _run_chunked(_crossing_chunk, args, reps, workers)
    return _binomial_estimate(outcomes, seed)


def sweep(
    p_values: list[float],
    n_values: list[int],
    aspect: int,
    reps: int,
    seed: int,
    workers: int = 1,
) -> list[dict]:
    """Crossing-probability grid over (p, n); one row per pair."""
    rows = []
    for n in n_values:
        d = RectDomain(aspect * n, n)
        for p in p_values:
            est = crossing_experiment(
                d, p, Color.RED, Axis.LEFT_RIGHT, reps, seed, workers=workers
            )
            rows.append(
                {
                    "p": p,
                    "n": n,
                    "aspect": aspect,
                    "crossing_probability": est.value,
                    "stderr": est.stderr,
                }
            )
    return rows


def rsw_check(
    n_values: list[int],
    reps: int,
    seed: int,
    aspect: int = 2,
    workers: int = 1,
) -> Report:
    """Long-way red crossing at p = 1/2 against the uniform 1/16 bound.

    For aspect 2 the lower 99% confidence bound is tested against 1/16; for
    other aspects (the 8n x n corollary) against strict positivity.
    """
    threshold = RSW_BOUND if aspect == 2 else 0.0
    rows = []
    ok = True
    for n in n_values:
        if n < 4:
            raise ValueError("rsw check needs n >= 4")
        d = RectDomain(aspect * n, n)
        est = crossing_experiment(
            d, 0.5, Color.RED, Axis.LEFT_RIGHT, reps, seed, workers=workers
        )
        lower = est.value - Z99 * est.stderr
        ok = ok and lower > threshold
        rows.append(
            {
                "n": n,
                "aspect": aspect,
                "estimate": est.value,
                "stderr": est.stderr,
                "lower99": lower,
                "threshold": threshold,
            }
        )
    return Report(
        name="rsw",
        verdict="PASS" if ok else "INCONCLUSIVE",
        rows=rows,
        params={"reps": reps, "seed": seed, "aspect": aspect},
    )


def _circuit_chunk(args: tuple, lo: int, hi: int) -> np.ndarray:
    n, p, color, seed = args
    ann = Annulus(n)
    d = ann.domain
    out = np.empty(hi - lo, dtype=np.uint8)
    for i, rep in enumerate(range(lo, hi)):
        key = SamplerKey(seed, rep)
        out[i] = has_circuit(diag_grid(key, d), color_grid(key, p, d), ann, Color(color))
    return out


def annulus_check(
    n_values: list[int],
    reps: int,
    seed: int,
    p: float = 0.5,
    delta0: float = 0.01,
    workers: int = 1,
) -> Report:
    """Red circuit probability in the 4n/6n annulus, bounded away from zero."""
    rows = []
    ok = True
    for n in n_values:
        outcomes = _run_chunked(
            _circuit_chunk, (n, p, int(Color.RED), seed), reps, workers
        )
        est = _binomial_estimate(outcomes, seed)
        lower = est.value - Z99 * est.stderr
        ok = ok and lower > delta0
        rows.append(
            {
                "n": n,
                "estimate": est.value,
                "stderr": est.stderr,
                "lower99": lower,
                "delta0": delta0,
            }
        )
    return Report(
        name="annulus",
        verdict="PASS" if ok else "INCONCLUSIVE",
        rows=rows,
        params={"reps": reps, "seed": seed, "p": p, "delta0": delta0},
    )


def pivotal_scaling(
    n_values: list[int], p: float, reps: int, seed: int
) -> Report:
    """Conditional mean pivotal count for the short-way blue crossing of
    2n x n rectangles, against logarithmic growth in n."""
    if p < 0.5:
        raise ValueError("the pivotal growth bound applies for p >= 1/2")
    if sorted(n_values) != list(n_values):
        raise ValueError("n values must be increasing")
    rows = []
    means = []
    for n in n_values:
        d = RectDomain(2 * n, n)
        event = CrossingEvent(d, Color.BLUE, Axis.TOP_BOTTOM)
        est, rejected = conditional_pivotal_mean(d, p, event, reps, seed)
        means.append(est.value)
        rows.append(
            {
                "n": n,
                "mean_pivotal": est.value,
                "stderr": est.stderr,
                "accepted": est.reps,
                "rejected": rejected,
                "acceptance_rate": est.reps / (est.reps + rejected),
            }
        )
    if len(n_values) < 2:
        return Report(
            name="pivotal",
            verdict="N/A",
            rows=rows,
            params={"p": p, "reps": reps, "seed": seed},
            details="at least two sizes are needed for a growth fit",
        )
    logn = np.log2(np.asarray(n_values, dtype=float))
    beta_hat = float(np.polyfit(logn, np.asarray(means), 1)[0])
    increasing = all(a < b for a, b in zip(means, means[1:]))
    for row in rows:
        row["beta_hat"] = beta_hat
    return Report(
        name="pivotal",
        verdict="PASS" if increasing and beta_hat > 0 else "FAIL",
        rows=rows,
        params={"p": p, "reps": reps, "seed": seed, "beta_hat": beta_hat},
    )


def decay_check(
    epsilon: float,
    k_values: list[int],
    reps: int,
    seed: int,
    color: Color = Color.BLUE,
    workers: int = 1,
) -> Report:
    """Subcritical crossing decay in 2^(k+1) x 2^k rectangles.

    For blue the estimated event is the top-bottom crossing at p = 1/2 +
    epsilon; for red, symmetrically, the left-right crossing at 1/2 - epsilon.
    """
    if not 0 <= epsilon <= 0.5:
        raise ValueError("epsilon must lie in [0, 1/2]")
    p = 0.5 + epsilon if color == Color.BLUE else 0.5 - epsilon
    axis = Axis.TOP_BOTTOM if color == Color.BLUE else Axis.LEFT_RIGHT
    rows = []
    estimates = []
    for k in k_values:
        d = RectDomain(2 ** (k + 1), 2**k)
        est = crossing_experiment(d, p, color, axis, reps, seed, workers=workers)
        estimates.append(est.value)
        rows.append(
            {"k": k, "p": p, "estimate": est.value, "stderr": est.stderr}
        )
    if epsilon == 0:
        return Report(
            name="decay",
            verdict="N/A",
            rows=rows,
            params={"epsilon": epsilon, "reps": reps, "seed": seed},
            details="no decay asserted at the critical point",
        )
    decreasing = all(a > b for a, b in zip(estimates, estimates[1:]))
    return Report(
        name="decay",
        verdict="PASS" if decreasing else "FAIL",
        rows=rows,
        params={"epsilon": epsilon, "reps": reps, "seed": seed},
    )


def pc_estimate(
    n: int,
    reps: int,
    tolerance: float,
    seed: int,
    workers: int = 1,
) -> tuple[Estimate, list[dict]]:
    """Bisection for the p where the n x n square crossing probability is 1/2.

    Each probe spends ``reps`` replicates on a disjoint replicate range, so
    the whole search is deterministic in (seed, parameters). Returns the
    midpoint estimate (the half-bracket as its uncertainty) and the probe
    history.
    """
    if n < 4:
        raise ValueError("pc estimate needs n >= 4")
    if not 0 < tolerance < 0.5:
        raise ValueError("tolerance must lie in (0, 1/2)")
    d = RectDomain(n, n)
    lo, hi = 0.0, 1.0
    rows = []
    probe = 0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        est = crossing_experiment(
            d,
            mid,
            Color.RED,
            Axis.LEFT_RIGHT,
            reps,
            seed,
            workers=workers,
            rep_offset=probe * reps,
        )
        rows.append(
            {"probe": probe, "p": mid, "estimate": est.value, "stderr": est.stderr}
        )
        if est.value < 0.5:
            lo = mid
        else:
            hi = mid
        probe += 1
    value = (lo + hi) / 2
    return (
        Estimate(
            value=value,
            stderr=(hi - lo) / 2,
            reps=reps,
            accepted=probe,
            seed=seed,
        ),
        rows,
    )


def validate_fkg_pair(small_e1: Event, small_e2: Event) -> None:
    """Oracle-certify the robust increasing hypotheses on small counterparts."""
    for name, e in (("first", small_e1), ("second", small_e2)):
        ok, _ = verify_robust(e)
        if not ok:
            raise HypothesisError(f"{name} event is not robust")
        ok, _ = verify_increasing(e)
        if not ok:
            raise HypothesisError(f"{name} event is not increasing")


def fkg_mc_check(
    e1: Event,
    e2: Event,
    small_e1: Event,
    small_e2: Event,
    p: float,
    reps: int,
    seed: int,
) -> Report:
    """Monte Carlo margin P(e1 and e2) - P(e1) P(e2) with a delta-method
    standard error; the hypotheses are first certified exactly on the
    scaled-down pair."""
    validate_fkg_pair(small_e1, small_e2)
    if e1.domain != e2.domain:
        raise ValueError("events must share a domain")
    d = e1.domain
    x1 = np.empty(reps, dtype=np.float64)
    x2 = np.empty(reps, dtype=np.float64)
    x12 = np.empty(reps, dtype=np.float64)
    for rep in range(reps):
        key = SamplerKey(seed, rep)
        omega = diag_grid(key, d)
        sigma = color_grid(key, p, d)
        v1 = e1.evaluate(omega, sigma)
        v2 = e2.evaluate(omega, sigma)
        x1[rep] = v1
        x2[rep] = v2
        x12[rep] = v1 and v2
    m1, m2, m12 = x1.mean(), x2.mean(), x12.mean()
    margin = float(m12 - m1 * m2)
    grad = np.array([1.0, -m2, -m1])
    cov = np.cov(np.vstack([x12, x1, x2]), ddof=1)
    stderr = float(math.sqrt(max(0.0, grad @ cov @ grad) / reps))
    verdict = "PASS" if margin > -2 * stderr else "FAIL"
    rows = [
        {
            "p": p,
            "p1": float(m1),
            "p2": float(m2),
            "p12": float(m12),
            "margin": margin,
            "stderr": stderr,
        }
    ]
    return Report(
        name="fkg",
        verdict=verdict,
        rows=rows,
        params={"reps": reps, "seed": seed, "event1": e1.describe(), "event2": e2.describe()},
    )


def overlapping_crossings_pair(n: int) -> tuple[Event, Event, Event, Event]:
    """Red crossings of the two overlapping 2n x n sub-rectangles of a
    3n x n strip, plus the n=1 counterparts used for oracle validation."""

    def pair(m: int) -> tuple[Event, Event]:
        strip = RectDomain(3 * m, m)
        e1 = subrect_crossing(strip, Color.RED, Axis.LEFT_RIGHT, 0, 0, 2 * m, m)
        e2 = subrect_crossing(strip, Color.RED, Axis.LEFT_RIGHT, m, 0, 2 * m, m)
        return e1, e2

    big1, big2 = pair(n)
    small1, small2 = pair(1)
    return big1, big2, small1, small2


def _duality_chunk(args: tuple, lo: int, hi: int) -> np.ndarray:
    cells_w, cells_h, p, seed, rep_offset, corrupt = args
    d = RectDomain(cells_w, cells_h)
    out = np.empty(hi - lo, dtype=np.uint8)
    for i, rep in enumerate(range(lo, hi)):
        key = SamplerKey(seed, rep_offset + rep)
        omega = diag_grid(key, d)
        sigma = color_grid(key, p, d)
        if corrupt:
            red_lr = has_crossing(omega, sigma, d, Color.RED, Axis.LEFT_RIGHT)
            bad = omega.copy()
            bad[0, 0] ^= 1
            blue_tb = has_crossing(bad, sigma, d, Color.BLUE, Axis.TOP_BOTTOM)
            out[i] = red_lr != blue_tb
        else:
            out[i] = check_duality(omega, sigma, d)
    return out


def duality_mass_check(
    sizes: list[tuple[int, int]],
    reps: int,
    seed: int,
    p: float = 0.5,
    workers: int = 1,
    corrupt_adjacency: bool = False,
) -> Report:
    """Check the crossing XOR duality on ``reps`` sampled configurations
    spread over the given sizes; any violation is a FAIL with the offending
    configuration serialized in the report.

    ``corrupt_adjacency`` is a test hook that evaluates the blue crossing on
    a perturbed diagonal grid, demonstrating detector sensitivity.
    """
    per_size = max(1, reps // len(sizes))
    rows = []
    witness = ""
    violations_total = 0
    for w, h in sizes:
        args = (w, h, p, seed, 0, corrupt_adjacency)
        outcomes = _run_chunked(_duality_chunk, args, per_size, workers)
        bad = int((outcomes == 0).sum())
        violations_total += bad
        rows.append({"cells_w": w, "cells_h": h, "reps": per_size, "violations": bad})
        if bad and not witness:
            rep = int(np.nonzero(outcomes == 0)[0][0])
            d = RectDomain(w, h)
            key = SamplerKey(seed, rep)
            witness = dump_config(diag_grid(key, d), color_grid(key, p, d), d)
    return Report(
        name="duality",
        verdict="PASS" if violations_total == 0 else "FAIL",
        rows=rows,
        params={"reps": reps, "seed": seed, "p": p},
        details=witness,
    )
