"""Numba kernels for cluster labeling on the triangulated rectangle.

The hot loop of every Monte Carlo experiment is one union-find pass per
sampled configuration; doing it in compiled code keeps the acceptance suite
within its runtime budgets. Labels are canonicalized to the smallest member
site in row-major order, so labelings are reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent: np.ndarray, i: int) -> int:
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def _union(parent: np.ndarray, size: np.ndarray, a: int, b: int) -> None:
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]


@njit(cache=True)
def label_components(
    sigma: np.ndarray,
    omega: np.ndarray,
    target: int,
    site_mask: np.ndarray,
    cell_mask: np.ndarray,
) -> np.ndarray:
    """Label the ``target``-colored clusters restricted to the given masks.

    A lattice edge is usable when it is the side of at least one active cell;
    a diagonal edge when its cell is active. Returns per-site labels (flat
    row-major index of the smallest member), -1 for inactive/other-color
    sites.
    """
    sh, sw = sigma.shape
    ch, cw = omega.shape
    n = sh * sw
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)

    def on(y, x):
        return site_mask[y, x] and sigma[y, x] == target

    for y in range(sh):
        for x in range(sw - 1):
            # horizontal edge (x,y)-(x+1,y); incident cells (x,y) and (x,y-1)
            ok = False
            if y < ch and cell_mask[y, x]:
                ok = True
            if y > 0 and cell_mask[y - 1, x]:
                ok = True
            if ok and on(y, x) and on(y, x + 1):
                _union(parent, size, y * sw + x, y * sw + x + 1)
    for y in range(sh - 1):
        for x in range(sw):
            # vertical edge (x,y)-(x,y+1); incident cells (x,y) and (x-1,y)
            ok = False
            if x < cw and cell_mask[y, x]:
                ok = True
            if x > 0 and cell_mask[y, x - 1]:
                ok = True
            if ok and on(y, x) and on(y + 1, x):
                _union(parent, size, y * sw + x, (y + 1) * sw + x)
    for cy in range(ch):
        for cx in range(cw):
            if not cell_mask[cy, cx]:
                continue
            if omega[cy, cx] == 1:  # NESW: SW-NE
                if on(cy, cx) and on(cy + 1, cx + 1):
                    _union(parent, size, cy * sw + cx, (cy + 1) * sw + cx + 1)
            else:  # NWSE: NW-SE
                if on(cy + 1, cx) and on(cy, cx + 1):
                    _union(parent, size, (cy + 1) * sw + cx, cy * sw + cx + 1)

    labels = np.full((sh, sw), -1, dtype=np.int64)
    canon = np.full(n, -1, dtype=np.int64)
    for y in range(sh):
        for x in range(sw):
            if on(y, x):
                r = _find(parent, y * sw + x)
                if canon[r] < 0:
                    canon[r] = y * sw + x
                labels[y, x] = canon[r]
    return labels


@njit(cache=True)
def crossing_full(sigma: np.ndarray, omega: np.ndarray, target: int, axis: int) -> bool:
    """Does ``target`` cross the full rectangle along ``axis``?

    ``axis`` 0 is left-right, 1 is top-bottom. Uses two virtual arc nodes on
    top of the union-find, no masks (full domain).
    """
    sh, sw = sigma.shape
    n = sh * sw
    parent = np.arange(n + 2, dtype=np.int64)
    size = np.ones(n + 2, dtype=np.int64)
    va = n  # first arc (left or top)
    vb = n + 1  # second arc (right or bottom)

    for y in range(sh):
        for x in range(sw - 1):
            if sigma[y, x] == target and sigma[y, x + 1] == target:
                _union(parent, size, y * sw + x, y * sw + x + 1)
    for y in range(sh - 1):
        for x in range(sw):
            if sigma[y, x] == target and sigma[y + 1, x] == target:
                _union(parent, size, y * sw + x, (y + 1) * sw + x)
    ch, cw = omega.shape
    for cy in range(ch):
        for cx in range(cw):
            if omega[cy, cx] == 1:
                if sigma[cy, cx] == target and sigma[cy + 1, cx + 1] == target:
                    _union(parent, size, cy * sw + cx, (cy + 1) * sw + cx + 1)
            else:
                if sigma[cy + 1, cx] == target and sigma[cy, cx + 1] == target:
                    _union(parent, size, (cy + 1) * sw + cx, cy * sw + cx + 1)

    if axis == 0:
        for y in range(sh):
            if sigma[y, 0] == target:
                _union(parent, size, y * sw, va)
            if sigma[y, sw - 1] == target:
                _union(parent, size, y * sw + sw - 1, vb)
    else:
        for x in range(sw):
            if sigma[sh - 1, x] == target:
                _union(parent, size, (sh - 1) * sw + x, va)
            if sigma[0, x] == target:
                _union(parent, size, x, vb)
    return _find(parent, va) == _find(parent, vb)
