"""Lattice geometry: domains, colors, diagonal orientations, cell types.

The model lives on a rectangle of unit cells. Sites are the integer corners,
``0 <= x <= cells_w`` and ``0 <= y <= cells_h``. Each cell carries one of two
diagonals, turning the square lattice into a triangulation:

* ``NWSE`` joins the cell's north-west and south-east corners (glyph ``\\``),
* ``NESW`` joins the north-east and south-west corners (glyph ``/``).

Grids are dense numpy arrays indexed ``[y, x]``: a color grid has shape
``(cells_h + 1, cells_w + 1)`` and a diagonal grid ``(cells_h, cells_w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

Site = tuple[int, int]
Cell = tuple[int, int]


class Color(IntEnum):
    BLUE = 0
    RED = 1

    @property
    def other(self) -> "Color":
        return Color(1 - self)


class Diag(IntEnum):
    NWSE = 0
    NESW = 1

    @property
    def flipped(self) -> "Diag":
        return Diag(1 - self)


class CellType(IntEnum):
    N = 0
    A = 1
    B = 2


class FlipEffect(IntEnum):
    DECREASES = -1
    NEUTRAL = 0
    INCREASES = 1


class Axis(IntEnum):
    LEFT_RIGHT = 0
    TOP_BOTTOM = 1


@dataclass(frozen=True)
class RectDomain:
    """A ``cells_w x cells_h`` rectangle of cells with the four boundary arcs.

    Corner sites belong to both incident arcs (the convention that makes the
    crossing duality exact; see :func:`triperc.connectivity.check_duality`).
    """

    cells_w: int
    cells_h: int

    MAX_SIDE = 1 << 14

    def __post_init__(self) -> None:
        if self.cells_w < 1 or self.cells_h < 1:
            raise ValueError("domain must have at least one cell per side")
        if self.cells_w > self.MAX_SIDE or self.cells_h > self.MAX_SIDE:
            raise ValueError(f"domain side exceeds {self.MAX_SIDE} cells")

    @property
    def sites_w(self) -> int:
        return self.cells_w + 1

    @property
    def sites_h(self) -> int:
        return self.cells_h + 1

    @property
    def n_sites(self) -> int:
        return self.sites_w * self.sites_h

    @property
    def n_cells(self) -> int:
        return self.cells_w * self.cells_h

    def contains_site(self, s: Site) -> bool:
        x, y = s
        return 0 <= x <= self.cells_w and 0 <= y <= self.cells_h

    def contains_cell(self, c: Cell) -> bool:
        x, y = c
        return 0 <= x < self.cells_w and 0 <= y < self.cells_h

    def sites(self):
        for y in range(self.sites_h):
            for x in range(self.sites_w):
                yield (x, y)

    def cells(self):
        for y in range(self.cells_h):
            for x in range(self.cells_w):
                yield (x, y)

    def arc_sites(self, axis: Axis, which: int) -> list[Site]:
        """Sites on one arc: ``which=0`` is Left (or Top), ``1`` Right (Bottom)."""
        if axis == Axis.LEFT_RIGHT:
            x = 0 if which == 0 else self.cells_w
            return [(x, y) for y in range(self.sites_h)]
        y = self.cells_h if which == 0 else 0
        return [(x, y) for x in range(self.sites_w)]


def check_grids(omega: np.ndarray, sigma: np.ndarray, d: RectDomain) -> None:
    if omega.shape != (d.cells_h, d.cells_w):
        raise ValueError(
            f"diagonal grid shape {omega.shape} does not match domain "
            f"{d.cells_w}x{d.cells_h}"
        )
    if sigma.shape != (d.sites_h, d.sites_w):
        raise ValueError(
            f"color grid shape {sigma.shape} does not match domain "
            f"{d.cells_w}x{d.cells_h}"
        )


def _pair_score(a: Color, b: Color) -> int:
    # +1 if the corner pair is uniformly red, -1 uniformly blue, 0 mixed
    if a == b:
        return 1 if a == Color.RED else -1
    return 0


def classify_cell(nw: Color, ne: Color, sw: Color, se: Color) -> CellType:
    """Classify a cell by its corner colors.

    The NESW diagonal joins the NE/SW corners and the NWSE diagonal the NW/SE
    corners; the type records which orientation favors red over blue. Exactly
    6 of the 16 colorings are N, 5 are A and 5 are B.
    """
    nesw = _pair_score(ne, sw)
    nwse = _pair_score(nw, se)
    if nesw > nwse:
        return CellType.A
    if nesw < nwse:
        return CellType.B
    return CellType.N


def classify_cell_grid(sigma: np.ndarray) -> np.ndarray:
    """Vectorized :func:`classify_cell` over a color grid; shape (h-1, w-1)."""
    nw = sigma[1:, :-1].astype(np.int8)
    ne = sigma[1:, 1:].astype(np.int8)
    sw = sigma[:-1, :-1].astype(np.int8)
    se = sigma[:-1, 1:].astype(np.int8)

    def score(a, b):
        return np.where(a == b, 2 * a - 1, 0)

    diff = score(ne, sw) - score(nw, se)
    out = np.full(diff.shape, CellType.N, dtype=np.int8)
    out[diff > 0] = CellType.A
    out[diff < 0] = CellType.B
    return out


def flip_increases(t: CellType, frm: Diag, to: Diag) -> FlipEffect:
    """Effect on robust increasing observables of flipping a cell's diagonal.

    For type-A cells the NWSE -> NESW flip increases (the NESW pair is the
    redder one); type B is the mirror image; type N is always neutral.
    """
    if frm == to:
        raise ValueError("flip requires two distinct orientations")
    if t == CellType.N:
        return FlipEffect.NEUTRAL
    up = frm == Diag.NWSE  # NWSE -> NESW direction
    if t == CellType.A:
        return FlipEffect.INCREASES if up else FlipEffect.DECREASES
    return FlipEffect.DECREASES if up else FlipEffect.INCREASES


def diagonal_neighbor(s: Site, cell: Cell, orientation: Diag) -> Site | None:
    """The corner opposite ``s`` in ``cell`` if the diagonal joins them."""
    x, y = s
    cx, cy = cell
    corners = {(cx, cy), (cx + 1, cy), (cx, cy + 1), (cx + 1, cy + 1)}
    if s not in corners:
        raise ValueError(f"site {s} is not a corner of cell {cell}")
    opposite = (2 * cx + 1 - x, 2 * cy + 1 - y)
    if orientation == Diag.NESW:
        joined = {(cx, cy), (cx + 1, cy + 1)}
    else:
        joined = {(cx, cy + 1), (cx + 1, cy)}
    return opposite if s in joined else None


def neighbors(s: Site, d: RectDomain, omega: np.ndarray) -> list[Site]:
    """Neighbors of a site in the triangulation restricted to the domain."""
    if not d.contains_site(s):
        raise ValueError(f"site {s} outside domain {d.cells_w}x{d.cells_h}")
    x, y = s
    out = []
    for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
        if d.contains_site((nx, ny)):
            out.append((nx, ny))
    for cx in (x - 1, x):
        for cy in (y - 1, y):
            if not d.contains_cell((cx, cy)):
                continue
            n = diagonal_neighbor(s, (cx, cy), Diag(int(omega[cy, cx])))
            if n is not None:
                out.append(n)
    return out


def dump_config(omega: np.ndarray, sigma: np.ndarray, d: RectDomain) -> str:
    """Textual dump: site rows (R/B) top to bottom, then cell rows (\\ or /)."""
    check_grids(omega, sigma, d)
    lines = []
    for y in range(d.cells_h, -1, -1):
        lines.append("".join("R" if sigma[y, x] else "B" for x in range(d.sites_w)))
    for y in range(d.cells_h - 1, -1, -1):
        lines.append("".join("/" if omega[y, x] else "\\" for x in range(d.cells_w)))
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> tuple[np.ndarray, np.ndarray, RectDomain]:
    """Inverse of :func:`dump_config`."""
    lines = [ln for ln in text.split("\n") if ln]
    site_lines = [ln for ln in lines if set(ln) <= {"R", "B"}]
    cell_lines = [ln for ln in lines if set(ln) <= {"/", "\\"}]
    if len(site_lines) + len(cell_lines) != len(lines):
        raise ValueError("mixed or invalid characters in configuration dump")
    if len(site_lines) != len(cell_lines) + 1:
        raise ValueError("expected one more site row than cell rows")
    d = RectDomain(cells_w=len(site_lines[0]) - 1, cells_h=len(cell_lines))
    sigma = np.zeros((d.sites_h, d.sites_w), dtype=np.uint8)
    for i, ln in enumerate(site_lines):
        if len(ln) != d.sites_w:
            raise ValueError("ragged site rows")
        sigma[d.cells_h - i] = [1 if ch == "R" else 0 for ch in ln]
    omega = np.zeros((d.cells_h, d.cells_w), dtype=np.uint8)
    for i, ln in enumerate(cell_lines):
        if len(ln) != d.cells_w:
            raise ValueError("ragged cell rows")
        omega[d.cells_h - 1 - i] = [1 if ch == "/" else 0 for ch in ln]
    return omega, sigma, d
