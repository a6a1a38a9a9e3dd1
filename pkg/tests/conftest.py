"""Shared brute-force oracles, kept independent of the library's fast paths."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from triperc.connectivity import Annulus
from triperc.geometry import Color, Diag, RectDomain, diagonal_neighbor


def iter_all_configs(d: RectDomain):
    """Every (omega, sigma) of a tiny domain, one mutated pair per step."""
    omega = np.zeros((d.cells_h, d.cells_w), dtype=np.uint8)
    sigma = np.zeros((d.sites_h, d.sites_w), dtype=np.uint8)
    cells = list(d.cells())
    sites = list(d.sites())
    for wbits in range(1 << len(cells)):
        for i, (cx, cy) in enumerate(cells):
            omega[cy, cx] = (wbits >> i) & 1
        for sbits in range(1 << len(sites)):
            for i, (x, y) in enumerate(sites):
                sigma[y, x] = (sbits >> i) & 1
            yield omega, sigma


def masked_neighbors(s, d, omega, site_mask, cell_mask):
    """Adjacency restricted to a cell region, recomputed from first principles."""
    x, y = s
    out = []
    # orthogonal edges must border an active cell
    for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
        if not d.contains_site((nx, ny)) or not site_mask[ny, nx]:
            continue
        if ny == y:  # horizontal edge; incident cells above and below
            cxs = [(min(x, nx), y), (min(x, nx), y - 1)]
        else:  # vertical edge; incident cells right and left
            cxs = [(x, min(y, ny)), (x - 1, min(y, ny))]
        if any(d.contains_cell(c) and cell_mask[c[1], c[0]] for c in cxs):
            out.append((nx, ny))
    for cx in (x - 1, x):
        for cy in (y - 1, y):
            if not d.contains_cell((cx, cy)) or not cell_mask[cy, cx]:
                continue
            n = diagonal_neighbor(s, (cx, cy), Diag(int(omega[cy, cx])))
            if n is not None and site_mask[n[1], n[0]]:
                out.append(n)
    return out


def dfs_clusters(omega, sigma, d, color, site_mask=None, cell_mask=None):
    """Plain depth-first clusters: site -> smallest member flat index."""
    if site_mask is None:
        site_mask = np.ones((d.sites_h, d.sites_w), dtype=bool)
    if cell_mask is None:
        cell_mask = np.ones((d.cells_h, d.cells_w), dtype=bool)
    seen = {}
    for start in d.sites():
        sx, sy = start
        if start in seen or not site_mask[sy, sx] or sigma[sy, sx] != color:
            continue
        stack = [start]
        comp = []
        seen[start] = None
        while stack:
            s = stack.pop()
            comp.append(s)
            for t in masked_neighbors(s, d, omega, site_mask, cell_mask):
                if t not in seen and sigma[t[1], t[0]] == color:
                    seen[t] = None
                    stack.append(t)
        label = min(y * d.sites_w + x for x, y in comp)
        for s in comp:
            seen[s] = label
    return seen


def winding_circuit_oracle(omega, sigma, ann: Annulus, color: Color) -> bool:
    """Does a ``color`` cycle in the closed annulus wind around the hole?

    Independent of the duality route: lifts each cluster along a radial cut
    and looks for holonomy. A spanning-tree potential conflict on a non-tree
    edge means some cycle crosses the cut a nonzero net number of times,
    i.e. surrounds the inner square.
    """
    d = ann.domain
    center = 3 * ann.n
    site_mask = ann.site_mask()
    cell_mask = ann.cell_mask()

    def cut_weight(u, v):
        # signed crossings of the upward ray x = center + 1/2, y > center
        (x1, y1), (x2, y2) = u, v
        if min(x1, x2) != center or max(x1, x2) != center + 1:
            return 0
        ycross = y1 if y1 == y2 else (y1 + y2) / 2
        if ycross <= center:
            return 0
        return 1 if x2 > x1 else -1

    potential = {}
    for start in d.sites():
        sx, sy = start
        if start in potential or not site_mask[sy, sx] or sigma[sy, sx] != color:
            continue
        potential[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v in masked_neighbors(u, d, omega, site_mask, cell_mask):
                if sigma[v[1], v[0]] != color:
                    continue
                h = potential[u] + cut_weight(u, v)
                if v not in potential:
                    potential[v] = h
                    stack.append(v)
                elif potential[v] != h:
                    return True
    return False


@pytest.fixture(scope="session")
def all_16_colorings():
    return list(itertools.product([Color.BLUE, Color.RED], repeat=4))


def fkg_catalogue():
    """Robust increasing event pairs on 1x1 and 2x2-cell domains.

    Kept small-support on the 2x2 domain so the exact hypothesis checks stay
    cheap; one pair exercises the full-rectangle crossings.
    """
    from triperc.events import ConnectionEvent, CrossingEvent, subrect_crossing
    from triperc.geometry import Axis

    d1, d2 = RectDomain(1, 1), RectDomain(2, 2)
    lr1 = CrossingEvent(d1, Color.RED, Axis.LEFT_RIGHT)
    tb1 = CrossingEvent(d1, Color.RED, Axis.TOP_BOTTOM)
    conn1 = ConnectionEvent(d1, frozenset({(0, 0)}), frozenset({(1, 1)}), Color.RED)
    lr2 = CrossingEvent(d2, Color.RED, Axis.LEFT_RIGHT)
    tb2 = CrossingEvent(d2, Color.RED, Axis.TOP_BOTTOM)
    left_col = subrect_crossing(d2, Color.RED, Axis.TOP_BOTTOM, 0, 0, 1, 2)
    right_col = subrect_crossing(d2, Color.RED, Axis.TOP_BOTTOM, 1, 0, 1, 2)
    bottom_row = subrect_crossing(d2, Color.RED, Axis.LEFT_RIGHT, 0, 0, 2, 1)
    top_row = subrect_crossing(d2, Color.RED, Axis.LEFT_RIGHT, 0, 1, 2, 1)
    cell_conn = ConnectionEvent(
        d2, frozenset({(0, 0)}), frozenset({(1, 1)}), Color.RED, frozenset({(0, 0)})
    )
    return [
        (lr1, tb1),
        (lr1, conn1),
        (tb1, conn1),
        (lr1, lr1),
        (conn1, lr1 & tb1),
        (lr2, tb2),
        (left_col, bottom_row),
        (left_col, right_col),
        (bottom_row, top_row),
        (cell_conn, left_col),
        (cell_conn, bottom_row),
        (left_col, left_col),
    ]
