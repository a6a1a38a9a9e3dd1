"""Pivotal sites of crossing-type events and conditional pivotal statistics.

A site is pivotal when flipping its color toggles the event with the
diagonals frozen. The reference implementation flips every site and
re-evaluates; for full-rectangle crossings an optimized variant reads the
answer off two cluster labelings through the crossing duality:

* flipping an off-color site to the crossing color creates the crossing
  exactly when the site bridges arc-touching clusters of the crossing color;
* removing an on-color site kills the crossing exactly when the site bridges
  arc-touching clusters of the dual crossing (other color, other axis).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .connectivity import build_clusters
from .events import CrossingEvent, Event
from .geometry import Axis, Color, RectDomain, Site
from .rng import SamplerKey, color_grid, diag_grid


@dataclass(frozen=True)
class PivotalReport:
    event: str
    event_occurred: bool
    pivotal_sites: frozenset[Site]


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    reps: int
    accepted: int
    seed: int


class EstimationError(RuntimeError):
    def __init__(self, message: str, attempted: int, accepted: int):
        super().__init__(f"{message} (attempted {attempted}, accepted {accepted})")
        self.attempted = attempted
        self.accepted = accepted


def pivotal_sites_reference(
    omega: np.ndarray, sigma: np.ndarray, d: RectDomain, event: Event
) -> PivotalReport:
    """Flip every site and re-evaluate; exact for any event on the domain."""
    if event.domain != d:
        raise ValueError("event is not defined on this domain")
    base = event(omega, sigma)
    pivotal = []
    work = sigma.copy()
    for y in range(d.sites_h):
        for x in range(d.sites_w):
            work[y, x] ^= 1
            if event(omega, work) != base:
                pivotal.append((x, y))
            work[y, x] ^= 1
    return PivotalReport(event.describe(), base, frozenset(pivotal))


def _arc_touch(labels: np.ndarray, comp_flag_shape: int, arc_slice) -> np.ndarray:
    flags = np.zeros(comp_flag_shape, dtype=bool)
    vals = arc_slice[arc_slice >= 0]
    flags[vals] = True
    return flags


def _bridges(
    labels: np.ndarray,
    omega: np.ndarray,
    touch_a: np.ndarray,
    touch_b: np.ndarray,
    on_a: np.ndarray,
    on_b: np.ndarray,
) -> np.ndarray:
    """Per-site: adjacent (or own-arc) contact with an arc-a-touching cluster
    and an arc-b-touching cluster of the labeled color."""
    sh, sw = labels.shape
    ta = np.zeros((sh, sw), dtype=bool)
    tb = np.zeros((sh, sw), dtype=bool)
    site_a = np.where(labels >= 0, touch_a[labels], False)
    site_b = np.where(labels >= 0, touch_b[labels], False)

    def spread(dst, src, dy, dx, gate=None):
        # dst[y, x] |= src[y + dy, x + dx], optionally gated per target site
        ys = slice(max(0, -dy), sh - max(0, dy))
        xs = slice(max(0, -dx), sw - max(0, dx))
        ys_s = slice(max(0, dy), sh - max(0, -dy))
        xs_s = slice(max(0, dx), sw - max(0, -dx))
        piece = src[ys_s, xs_s]
        if gate is not None:
            piece = piece & gate
        dst[ys, xs] |= piece

    nesw = omega == 1
    nwse = omega == 0
    for dst, src in ((ta, site_a), (tb, site_b)):
        for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            spread(dst, src, dy, dx)
        # diagonal contacts: neighbor (x+1, y+1) iff cell (x, y) is NESW, etc.
        spread(dst, src, 1, 1, nesw)
        spread(dst, src, -1, -1, nesw)
        # neighbor (x+1, y-1) iff cell (x, y-1) is NWSE; (x-1, y+1) mirrored
        spread(dst, src, -1, 1, nwse)
        spread(dst, src, 1, -1, nwse)
    ta |= on_a
    tb |= on_b
    return ta & tb


def _arc_masks(d: RectDomain, axis: Axis) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros((d.sites_h, d.sites_w), dtype=bool)
    b = np.zeros((d.sites_h, d.sites_w), dtype=bool)
    if axis == Axis.LEFT_RIGHT:
        a[:, 0] = True
        b[:, -1] = True
    else:
        a[-1, :] = True
        b[0, :] = True
    return a, b


def pivotal_mask_crossing(
    omega: np.ndarray, sigma: np.ndarray, event: CrossingEvent
) -> tuple[bool, np.ndarray]:
    """Optimized pivotal computation for a full-rectangle crossing event.

    Returns (event occurred, boolean site mask of pivotal sites).
    """
    d = event.domain
    c, axis = event.color, event.axis
    dual_c, dual_axis = c.other, Axis(1 - event.axis)

    prim = build_clusters(omega, sigma, d, c)
    n = d.n_sites
    pa, pb = _arc_masks(d, axis)
    da, db = _arc_masks(d, dual_axis)
    prim_touch_a = _arc_touch(prim.labels, n, prim.labels[pa])
    prim_touch_b = _arc_touch(prim.labels, n, prim.labels[pb])
    occurred = bool((prim_touch_a & prim_touch_b).any())

    if occurred:
        # an on-color site is pivotal iff turning it off creates the dual
        # crossing, i.e. it bridges the dual-color arc-touching clusters
        dual = build_clusters(omega, sigma, d, dual_c)
        touch_a = _arc_touch(dual.labels, n, dual.labels[da])
        touch_b = _arc_touch(dual.labels, n, dual.labels[db])
        mask = (sigma == int(c)) & _bridges(
            dual.labels, omega, touch_a, touch_b, da, db
        )
    else:
        # an off-color site is pivotal iff turning it on creates the crossing
        mask = (sigma == int(dual_c)) & _bridges(
            prim.labels, omega, prim_touch_a, prim_touch_b, pa, pb
        )
    return occurred, mask


def pivotal_sites(
    omega: np.ndarray,
    sigma: np.ndarray,
    d: RectDomain,
    event: Event,
    method: str = "auto",
) -> PivotalReport:
    """Exact pivotal set of ``event``; crossings use the fast two-labeling
    path unless ``method='reference'`` forces the flip-everything scan."""
    if method not in ("auto", "reference", "optimized"):
        raise ValueError(f"unknown method {method!r}")
    fast = isinstance(event, CrossingEvent) and method != "reference"
    if method == "optimized" and not fast:
        raise ValueError("optimized method only applies to crossing events")
    if not fast:
        return pivotal_sites_reference(omega, sigma, d, event)
    if event.domain != d:
        raise ValueError("event is not defined on this domain")
    occurred, mask = pivotal_mask_crossing(omega, sigma, event)
    ys, xs = np.nonzero(mask)
    return PivotalReport(
        event.describe(),
        occurred,
        frozenset((int(x), int(y)) for x, y in zip(xs, ys)),
    )


def conditional_pivotal_mean(
    d: RectDomain,
    p: float,
    event: CrossingEvent,
    reps: int,
    seed: int,
    accept_cap_factor: int = 100,
) -> tuple[Estimate, int]:
    """Monte Carlo mean of the pivotal count conditioned on the event.

    Rejection-samples configurations until ``reps`` are accepted; returns the
    estimate and the number of rejected samples. Deterministic in
    ``(seed, parameters)``.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    counts = np.empty(reps, dtype=np.int64)
    accepted = 0
    attempted = 0
    cap = accept_cap_factor * reps
    while accepted < reps:
        if attempted >= cap:
            raise EstimationError(
                "acceptance cap exhausted while conditioning on the event",
                attempted,
                accepted,
            )
        key = SamplerKey(seed, attempted)
        attempted += 1
        omega = diag_grid(key, d)
        sigma = color_grid(key, p, d)
        occurred, mask = pivotal_mask_crossing(omega, sigma, event)
        if not occurred:
            continue
        counts[accepted] = int(mask.sum())
        accepted += 1
    value = float(counts.mean())
    stderr = float(counts.std(ddof=1) / sqrt(reps)) if reps > 1 else 0.0
    return (
        Estimate(value=value, stderr=stderr, reps=reps, accepted=accepted, seed=seed),
        attempted - accepted,
    )
