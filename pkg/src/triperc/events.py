"""Finitely supported events on (diagonals, colors) over a rectangle.

Each event evaluates on full grids but declares the sites and cells it
actually depends on; the exact-enumeration oracle sums only over that
support, which is what makes small-domain verification affordable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connectivity import Annulus, build_clusters, has_circuit, has_crossing
from .geometry import Axis, Cell, Color, Diag, RectDomain, Site, check_grids

_AXIS_NAMES = {Axis.LEFT_RIGHT: "left-right", Axis.TOP_BOTTOM: "top-bottom"}
_COLOR_NAMES = {Color.RED: "red", Color.BLUE: "blue"}


class Event:
    """Base event; subclasses fill in evaluation, support and description."""

    domain: RectDomain

    def evaluate(self, omega: np.ndarray, sigma: np.ndarray) -> bool:
        raise NotImplementedError

    def support(self) -> tuple[frozenset[Site], frozenset[Cell]]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __call__(self, omega: np.ndarray, sigma: np.ndarray) -> bool:
        check_grids(omega, sigma, self.domain)
        return self.evaluate(omega, sigma)

    def __and__(self, other: "Event") -> "AndEvent":
        return AndEvent(self, other)

    def __or__(self, other: "Event") -> "OrEvent":
        return OrEvent(self, other)

    def __invert__(self) -> "NotEvent":
        return NotEvent(self)


def _full_support(d: RectDomain) -> tuple[frozenset[Site], frozenset[Cell]]:
    return frozenset(d.sites()), frozenset(d.cells())


@dataclass(frozen=True)
class CrossingEvent(Event):
    domain: RectDomain
    color: Color
    axis: Axis

    def evaluate(self, omega, sigma):
        return has_crossing(omega, sigma, self.domain, self.color, self.axis)

    def support(self):
        return _full_support(self.domain)

    def describe(self):
        return (
            f"{_COLOR_NAMES[self.color]} {_AXIS_NAMES[self.axis]} crossing of "
            f"{self.domain.cells_w}x{self.domain.cells_h} cells"
        )

    def dual(self) -> "CrossingEvent":
        """The crossing whose occurrence is the exact complement of this one."""
        return CrossingEvent(self.domain, self.color.other, Axis(1 - self.axis))


@dataclass(frozen=True)
class ConnectionEvent(Event):
    """``a`` is joined to ``b`` by a ``color`` path inside a cell region.

    ``region`` is a set of cells (``None`` means the whole domain); paths may
    use the corners of region cells, lattice edges bordering a region cell
    and diagonals of region cells. Such events are robust and increasing.
    """

    domain: RectDomain
    a: frozenset[Site]
    b: frozenset[Site]
    color: Color
    region: frozenset[Cell] | None = None

    def __post_init__(self):
        sites, _ = self.support()
        for s in self.a | self.b:
            if s not in sites:
                raise ValueError(f"endpoint {s} outside the connection region")
        if not self.a or not self.b:
            raise ValueError("connection endpoints must be nonempty")

    def _region(self) -> frozenset[Cell]:
        if self.region is None:
            return frozenset(self.domain.cells())
        return self.region

    def _masks(self):
        d = self.domain
        cm = np.zeros((d.cells_h, d.cells_w), dtype=np.bool_)
        sm = np.zeros((d.sites_h, d.sites_w), dtype=np.bool_)
        for cx, cy in self._region():
            cm[cy, cx] = True
            sm[cy : cy + 2, cx : cx + 2] = True
        return sm, cm

    def evaluate(self, omega, sigma):
        sm, cm = self._masks()
        labeling = build_clusters(omega, sigma, self.domain, self.color, sm, cm)
        la = {labeling.label_of(s) for s in self.a}
        lb = {labeling.label_of(s) for s in self.b}
        la.discard(-1)
        lb.discard(-1)
        return bool(la & lb)

    def support(self):
        cells = self._region()
        sites = frozenset(
            (cx + dx, cy + dy) for cx, cy in cells for dx in (0, 1) for dy in (0, 1)
        )
        return sites, cells

    def describe(self):
        return (
            f"{_COLOR_NAMES[self.color]} connection {sorted(self.a)} to "
            f"{sorted(self.b)} in {len(self._region())} cells"
        )


@dataclass(frozen=True)
class CircuitEvent(Event):
    annulus: Annulus
    color: Color
    domain: RectDomain = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", self.annulus.domain)

    def evaluate(self, omega, sigma):
        return has_circuit(omega, sigma, self.annulus, self.color)

    def support(self):
        ann = self.annulus
        sm = ann.site_mask()
        cm = ann.cell_mask()
        sites = frozenset((x, y) for (x, y) in self.domain.sites() if sm[y, x])
        cells = frozenset((x, y) for (x, y) in self.domain.cells() if cm[y, x])
        return sites, cells

    def describe(self):
        return (
            f"{_COLOR_NAMES[self.color]} circuit in the 4n/6n annulus, "
            f"n={self.annulus.n}"
        )


def _diag_step_cell(s: Site, t: Site) -> tuple[Cell, Diag]:
    cell = (min(s[0], t[0]), min(s[1], t[1]))
    need = Diag.NESW if (t[0] - s[0]) * (t[1] - s[1]) > 0 else Diag.NWSE
    return cell, need


@dataclass(frozen=True)
class FixedPathEvent(Event):
    """A specific site sequence is monochromatic and fully traversable.

    Diagonal steps require the straddled cell to carry the matching
    orientation, which is what makes such events non-robust in general.
    """

    domain: RectDomain
    path: tuple[Site, ...]
    color: Color

    def __post_init__(self):
        if len(self.path) < 1:
            raise ValueError("path must contain at least one site")
        for s in self.path:
            if not self.domain.contains_site(s):
                raise ValueError(f"path site {s} outside domain")
        for s, t in zip(self.path, self.path[1:]):
            dx, dy = abs(t[0] - s[0]), abs(t[1] - s[1])
            if (dx, dy) not in ((1, 0), (0, 1), (1, 1)):
                raise ValueError(f"non-adjacent consecutive path sites {s}, {t}")

    def evaluate(self, omega, sigma):
        for x, y in self.path:
            if sigma[y, x] != self.color:
                return False
        for s, t in zip(self.path, self.path[1:]):
            if abs(t[0] - s[0]) == 1 and abs(t[1] - s[1]) == 1:
                (cx, cy), need = _diag_step_cell(s, t)
                if omega[cy, cx] != need:
                    return False
        return True

    def support(self):
        cells = set()
        for s, t in zip(self.path, self.path[1:]):
            if abs(t[0] - s[0]) == 1 and abs(t[1] - s[1]) == 1:
                cells.add(_diag_step_cell(s, t)[0])
        return frozenset(self.path), frozenset(cells)

    def describe(self):
        return f"fixed {_COLOR_NAMES[self.color]} path {list(self.path)}"


@dataclass(frozen=True)
class TrueEvent(Event):
    domain: RectDomain

    def evaluate(self, omega, sigma):
        return True

    def support(self):
        return frozenset(), frozenset()

    def describe(self):
        return "constantly true"


def _merged_domain(*events: Event) -> RectDomain:
    domains = {e.domain for e in events}
    if len(domains) != 1:
        raise ValueError("combined events must share one domain")
    return domains.pop()


@dataclass(frozen=True)
class AndEvent(Event):
    left: Event
    right: Event
    domain: RectDomain = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", _merged_domain(self.left, self.right))

    def evaluate(self, omega, sigma):
        return self.left.evaluate(omega, sigma) and self.right.evaluate(omega, sigma)

    def support(self):
        s1, c1 = self.left.support()
        s2, c2 = self.right.support()
        return s1 | s2, c1 | c2

    def describe(self):
        return f"({self.left.describe()}) and ({self.right.describe()})"


@dataclass(frozen=True)
class OrEvent(Event):
    left: Event
    right: Event
    domain: RectDomain = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", _merged_domain(self.left, self.right))

    def evaluate(self, omega, sigma):
        return self.left.evaluate(omega, sigma) or self.right.evaluate(omega, sigma)

    def support(self):
        s1, c1 = self.left.support()
        s2, c2 = self.right.support()
        return s1 | s2, c1 | c2

    def describe(self):
        return f"({self.left.describe()}) or ({self.right.describe()})"


@dataclass(frozen=True)
class NotEvent(Event):
    inner: Event
    domain: RectDomain = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", self.inner.domain)

    def evaluate(self, omega, sigma):
        return not self.inner.evaluate(omega, sigma)

    def support(self):
        return self.inner.support()

    def describe(self):
        return f"not ({self.inner.describe()})"


def subrect_crossing(
    domain: RectDomain,
    color: Color,
    axis: Axis,
    x0: int,
    y0: int,
    w: int,
    h: int,
) -> ConnectionEvent:
    """Crossing of a ``w x h``-cell sub-rectangle, as a connection event."""
    if x0 < 0 or y0 < 0 or x0 + w > domain.cells_w or y0 + h > domain.cells_h:
        raise ValueError("sub-rectangle does not fit in the domain")
    region = frozenset((x0 + i, y0 + j) for i in range(w) for j in range(h))
    if axis == Axis.LEFT_RIGHT:
        a = frozenset((x0, y0 + j) for j in range(h + 1))
        b = frozenset((x0 + w, y0 + j) for j in range(h + 1))
    else:
        a = frozenset((x0 + i, y0 + h) for i in range(w + 1))
        b = frozenset((x0 + i, y0) for i in range(w + 1))
    return ConnectionEvent(domain, a, b, color, region)
