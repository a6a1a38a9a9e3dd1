"""Lazy interface exploration deciding a left-right red crossing.

The walk starts at the top-left corner between a virtual red region outside
the left arc and a virtual blue region outside the top arc. It moves through
the triangles of the (lazily revealed) triangulation keeping red on its left:
entering a triangle it reveals the apex color and turns accordingly, and it
reveals a cell's diagonal the first time it enters that cell. It leaves the
rectangle through the right side exactly when the fully sampled configuration
has a left-right red crossing, and through the bottom side otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .geometry import Cell, Color, Diag, RectDomain, Site
from .rng import SamplerKey, sample_color, sample_diagonal

# virtual sites outside the left/top arcs
VL = ("VL",)
VT = ("VT",)


class ExitSide(Enum):
    RIGHT = "right"
    BOTTOM = "bottom"


@dataclass
class LazySource:
    """Reveals colors/diagonals on demand; values match the eager grids."""

    key: SamplerKey
    p: float
    revealed_sites: dict[Site, Color] = field(default_factory=dict)
    revealed_cells: dict[Cell, Diag] = field(default_factory=dict)

    def site_color(self, s: Site) -> Color:
        c = self.revealed_sites.get(s)
        if c is None:
            c = sample_color(self.key, self.p, s[0], s[1])
            self.revealed_sites[s] = c
        return c

    def cell_diag(self, c: Cell) -> Diag:
        o = self.revealed_cells.get(c)
        if o is None:
            o = sample_diagonal(self.key, c[0], c[1])
            self.revealed_cells[c] = o
        return o


@dataclass(frozen=True)
class ExplorationResult:
    exit_side: ExitSide
    revealed_sites: dict[Site, Color]
    revealed_cells: dict[Cell, Diag]
    step_count: int
    trace: tuple[str, ...] = ()


# faces: ("corner",) | ("left", y) | ("top", x) | ("tri", cx, cy, idx)
# where idx 0/1 is the lower/upper triangle relative to the diagonal
_EXIT_RIGHT = ("exit", ExitSide.RIGHT)
_EXIT_BOTTOM = ("exit", ExitSide.BOTTOM)

# which triangle of a cell contains each side, per orientation
_SIDE_TRI = {
    Diag.NWSE: {"S": 0, "W": 0, "N": 1, "E": 1},
    Diag.NESW: {"S": 0, "E": 0, "N": 1, "W": 1},
}


def _tri_vertices(cx: int, cy: int, o: Diag, idx: int) -> tuple[Site, Site, Site]:
    sw, se = (cx, cy), (cx + 1, cy)
    nw, ne = (cx, cy + 1), (cx + 1, cy + 1)
    if o == Diag.NWSE:
        return (sw, nw, se) if idx == 0 else (nw, ne, se)
    return (sw, se, ne) if idx == 0 else (sw, ne, nw)


def _cell_face(src: LazySource, cx: int, cy: int, side: str):
    o = src.cell_diag((cx, cy))
    return ("tri", cx, cy, _SIDE_TRI[o][side])


def _other_face(u, v, face, src: LazySource, d: RectDomain):
    """The face across edge (u, v) from ``face``; may be an exit marker."""
    w, h = d.cells_w, d.cells_h
    if VL in (u, v) and VT in (u, v):
        raise RuntimeError("interface attempted to leave through the start edge")
    if VL in (u, v):
        (_, y) = u if v is VL else v
        below = ("left", y - 1) if y >= 1 else _EXIT_BOTTOM
        above = ("left", y) if y < h else ("corner",)
        return above if face == below else below
    if VT in (u, v):
        (x, _) = u if v is VT else v
        left = ("top", x - 1) if x >= 1 else ("corner",)
        right = ("top", x) if x < w else _EXIT_RIGHT
        return right if face == left else left
    (x1, y1), (x2, y2) = u, v
    if x1 == x2:  # vertical lattice edge
        x, y = x1, min(y1, y2)
        west = ("left", y) if x == 0 else _cell_face(src, x - 1, y, "E")
        east = _EXIT_RIGHT if x == w else _cell_face(src, x, y, "W")
        return east if face == west else west
    if y1 == y2:  # horizontal lattice edge
        x, y = min(x1, x2), y1
        north = ("top", x) if y == h else _cell_face(src, x, y, "S")
        south = _EXIT_BOTTOM if y == 0 else _cell_face(src, x, y - 1, "N")
        return south if face == north else north
    # diagonal edge: the two triangles of its cell
    cx, cy = min(x1, x2), min(y1, y2)
    o = src.cell_diag((cx, cy))
    assert face[0] == "tri" and face[1] == cx and face[2] == cy
    return ("tri", cx, cy, 1 - face[3])


def explore(d: RectDomain, src: LazySource, collect_trace: bool = False) -> ExplorationResult:
    """Run the interface walk; see the module docstring for the contract."""
    w, h = d.cells_w, d.cells_h

    def face_vertices(face):
        kind = face[0]
        if kind == "corner":
            return (VL, (0, h), VT)
        if kind == "left":
            y = face[1]
            return (VL, (0, y), (0, y + 1))
        if kind == "top":
            x = face[1]
            return (VT, (x, h), (x + 1, h))
        _, cx, cy, idx = face
        return _tri_vertices(cx, cy, src.cell_diag((cx, cy)), idx)

    u, v = VL, VT
    face = ("corner",)
    steps = 0
    cap = 12 * w * h + 6 * (w + h) + 16
    trace: list[str] = []
    while True:
        steps += 1
        if steps > cap:
            raise RuntimeError("interface exceeded its step bound")
        verts = face_vertices(face)
        rest = [s for s in verts if s != u and s != v]
        assert len(rest) == 1, (face, u, v)
        apex = rest[0]
        if apex is VL:
            color = Color.RED
        elif apex is VT:
            color = Color.BLUE
        else:
            color = src.site_color(apex)
        if collect_trace:
            trace.append(
                f"{_fmt(u)}-{_fmt(v)} apex={_fmt(apex)} "
                f"color={'R' if color == Color.RED else 'B'}"
            )
        if color == Color.RED:
            u = apex
        else:
            v = apex
        nxt = _other_face(u, v, face, src, d)
        if nxt[0] == "exit":
            if collect_trace:
                for (cx, cy), o in sorted(src.revealed_cells.items()):
                    trace.append(
                        f"cell ({cx},{cy})={'/' if o == Diag.NESW else chr(92)}"
                    )
            return ExplorationResult(
                exit_side=nxt[1],
                revealed_sites=dict(src.revealed_sites),
                revealed_cells=dict(src.revealed_cells),
                step_count=steps,
                trace=tuple(trace),
            )
        face = nxt


def _fmt(s) -> str:
    if s is VL:
        return "VL"
    if s is VT:
        return "VT"
    return f"({s[0]},{s[1]})"


def exploration_measurability_check(
    d: RectDomain,
    src: LazySource,
    result: ExplorationResult,
    resamples: int = 100,
    resample_seed: int = 0x5EED,
) -> bool:
    """Resampling everything the walk did not reveal never changes the verdict.

    Evaluates the crossing on full configurations whose revealed entries are
    pinned to the walk's values and whose free entries come from fresh keys.
    """
    import numpy as np

    from .connectivity import has_crossing
    from .geometry import Axis
    from .rng import color_grid, diag_grid

    for i in range(resamples):
        alt = SamplerKey(resample_seed, i)
        sigma = color_grid(alt, src.p, d)
        omega = diag_grid(alt, d)
        for (x, y), c in result.revealed_sites.items():
            sigma[y, x] = int(c)
        for (cx, cy), o in result.revealed_cells.items():
            omega[cy, cx] = int(o)
        crossing = has_crossing(omega, sigma, d, Color.RED, Axis.LEFT_RIGHT)
        if crossing != (result.exit_side == ExitSide.RIGHT):
            return False
    return True
