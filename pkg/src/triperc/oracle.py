"""Exhaustive enumeration over all (diagonals, colors) on tiny supports.

Exact annealed probabilities, robustness and monotonicity certification,
the Harris positive-correlation margin, and the pivotal-site identity behind
the derivative in p, all in rational arithmetic when p is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .events import Event
from .geometry import Cell, CellType, Color, Diag, RectDomain, Site, classify_cell

BUDGET_BITS = 26


class EnumerationBudgetError(RuntimeError):
    def __init__(self, required_bits: int):
        super().__init__(
            f"enumeration needs {required_bits} free bits, budget is {BUDGET_BITS}"
        )
        self.required_bits = required_bits


class HypothesisError(ValueError):
    """An oracle precondition (robustness, monotonicity) failed."""


class SigmaMonotonicity(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"
    NONE = "none"


@dataclass(frozen=True)
class ExactResult:
    """Exact annealed probability plus the sufficient statistics in p.

    ``counts_by_red[k]`` is the number of satisfying assignments of the
    support with exactly k red support sites, summed over the diagonal
    patterns; the probability is the induced polynomial in p divided by
    2**n_support_cells.
    """

    description: str
    n_support_sites: int
    n_support_cells: int
    counts_by_red: tuple[int, ...]
    probability: Fraction | float

    def probability_at(self, p):
        return _poly_at(self.counts_by_red, self.n_support_sites,
                        self.n_support_cells, p)


def _as_prob(p) -> Fraction | float:
    if isinstance(p, Fraction):
        pass
    elif isinstance(p, int):
        p = Fraction(p)
    else:
        p = float(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    return p


def _poly_at(counts, n_sites, n_cells, p):
    p = _as_prob(p)
    q = 1 - p
    total = sum(c * p**k * q ** (n_sites - k) for k, c in enumerate(counts))
    return total / 2**n_cells if isinstance(p, Fraction) else total / 2.0**n_cells


def _poly_derivative_at(counts, n_sites, n_cells, p):
    p = _as_prob(p)
    q = 1 - p
    total = 0
    for k, c in enumerate(counts):
        if c == 0:
            continue
        if k > 0:
            total += c * k * p ** (k - 1) * q ** (n_sites - k)
        if n_sites - k > 0:
            total -= c * (n_sites - k) * p**k * q ** (n_sites - k - 1)
    return total / 2**n_cells if isinstance(p, Fraction) else total / 2.0**n_cells


class _SupportEnumerator:
    """Iterates all assignments of the support, mutating shared grids.

    Everything outside the support is pinned (blue, NWSE); by the support
    contract the event cannot see it.
    """

    def __init__(self, domain: RectDomain, sites, cells, extra_sites=()):
        self.domain = domain
        self.sites: list[Site] = sorted(set(sites) | set(extra_sites))
        self.cells: list[Cell] = sorted(set(cells))
        bits = len(self.sites) + len(self.cells)
        if bits > BUDGET_BITS:
            raise EnumerationBudgetError(bits)
        self.omega = np.zeros((domain.cells_h, domain.cells_w), dtype=np.uint8)
        self.sigma = np.zeros((domain.sites_h, domain.sites_w), dtype=np.uint8)

    def __iter__(self):
        omega, sigma = self.omega, self.sigma
        for wbits in range(1 << len(self.cells)):
            for i, (cx, cy) in enumerate(self.cells):
                omega[cy, cx] = (wbits >> i) & 1
            for sbits in range(1 << len(self.sites)):
                n_red = 0
                for i, (x, y) in enumerate(self.sites):
                    bit = (sbits >> i) & 1
                    sigma[y, x] = bit
                    n_red += bit
                yield omega, sigma, n_red


def _cell_corners(c: Cell) -> list[Site]:
    cx, cy = c
    return [(cx, cy), (cx + 1, cy), (cx, cy + 1), (cx + 1, cy + 1)]


def _cell_type(sigma: np.ndarray, c: Cell) -> CellType:
    cx, cy = c
    return classify_cell(
        nw=Color(int(sigma[cy + 1, cx])),
        ne=Color(int(sigma[cy + 1, cx + 1])),
        sw=Color(int(sigma[cy, cx])),
        se=Color(int(sigma[cy, cx + 1])),
    )


def enumerate_prob(e: Event, p) -> ExactResult:
    """Exact annealed probability of ``e`` by exhausting its support."""
    sites, cells = e.support()
    enum = _SupportEnumerator(e.domain, sites, cells)
    counts = [0] * (len(enum.sites) + 1)
    for omega, sigma, n_red in enum:
        if e.evaluate(omega, sigma):
            counts[n_red] += 1
    counts = tuple(counts)
    return ExactResult(
        description=e.describe(),
        n_support_sites=len(enum.sites),
        n_support_cells=len(enum.cells),
        counts_by_red=counts,
        probability=_poly_at(counts, len(enum.sites), len(enum.cells), p),
    )


def verify_robust(e: Event):
    """Certify that flips of type-N cells never change the event.

    Returns ``(True, None)`` or ``(False, (omega, sigma, cell))`` with copies
    of a witnessing configuration.
    """
    sites, cells = e.support()
    for z in sorted(cells):
        enum = _SupportEnumerator(e.domain, sites, cells, extra_sites=_cell_corners(z))
        zx, zy = z
        for omega, sigma, _ in enum:
            if _cell_type(sigma, z) != CellType.N:
                continue
            before = e.evaluate(omega, sigma)
            omega[zy, zx] ^= 1
            after = e.evaluate(omega, sigma)
            omega[zy, zx] ^= 1
            if before != after:
                return False, (omega.copy(), sigma.copy(), z)
    return True, None


def sigma_monotonicity(e: Event) -> SigmaMonotonicity:
    """Direction of the event under blue -> red site flips, by enumeration."""
    sites, cells = e.support()
    enum = _SupportEnumerator(e.domain, sites, cells)
    up = down = False
    for omega, sigma, _ in enum:
        base = e.evaluate(omega, sigma)
        for x, y in enum.sites:
            if sigma[y, x] == 1:
                continue
            sigma[y, x] = 1
            flipped = e.evaluate(omega, sigma)
            sigma[y, x] = 0
            if flipped and not base:
                up = True
            elif base and not flipped:
                down = True
            if up and down:
                return SigmaMonotonicity.NONE
    if up:
        return SigmaMonotonicity.INCREASING
    if down:
        return SigmaMonotonicity.DECREASING
    return SigmaMonotonicity.CONSTANT


def verify_increasing(e: Event):
    """Certify monotonicity: nondecreasing under blue -> red site flips and,
    when the event is robust, under type-A NWSE -> NESW / type-B NESW -> NWSE
    diagonal flips.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is
    ``("sigma", omega, sigma, site)`` or ``("omega", omega, sigma, cell)``.
    """
    sites, cells = e.support()
    enum = _SupportEnumerator(e.domain, sites, cells)
    robust, _ = verify_robust(e)
    for omega, sigma, _ in enum:
        base = e.evaluate(omega, sigma)
        for x, y in enum.sites:
            if sigma[y, x] == 1:
                continue
            sigma[y, x] = 1
            flipped = e.evaluate(omega, sigma)
            sigma[y, x] = 0
            if base and not flipped:
                return False, ("sigma", omega.copy(), sigma.copy(), (x, y))
        if not robust:
            continue
        for zx, zy in enum.cells:
            t = _cell_type(sigma, (zx, zy))
            if t == CellType.N:
                continue
            # orient so the flip is the increasing direction for this type
            lo = Diag.NWSE if t == CellType.A else Diag.NESW
            old = Diag(int(omega[zy, zx]))
            omega[zy, zx] = int(lo)
            low_val = e.evaluate(omega, sigma)
            omega[zy, zx] = int(lo.flipped)
            high_val = e.evaluate(omega, sigma)
            omega[zy, zx] = int(old)
            if low_val and not high_val:
                return False, ("omega", omega.copy(), sigma.copy(), (zx, zy))
    return True, None


def fkg_margin(e1: Event, e2: Event, p, force: bool = False):
    """Exact P(e1 and e2) - P(e1) P(e2) for robust increasing events.

    For such events the margin is nonnegative; unless ``force`` is given,
    events failing the robust/increasing hypotheses are refused with the
    failing hypothesis named.
    """
    if e1.domain != e2.domain:
        raise ValueError("events must share a domain")
    if not force:
        for name, e in (("first", e1), ("second", e2)):
            ok, _ = verify_robust(e)
            if not ok:
                raise HypothesisError(f"{name} event is not robust")
            ok, _ = verify_increasing(e)
            if not ok:
                raise HypothesisError(f"{name} event is not increasing")
    s1, c1 = e1.support()
    s2, c2 = e2.support()
    enum = _SupportEnumerator(e1.domain, s1 | s2, c1 | c2)
    n = len(enum.sites)
    counts1 = [0] * (n + 1)
    counts2 = [0] * (n + 1)
    counts12 = [0] * (n + 1)
    for omega, sigma, n_red in enum:
        v1 = e1.evaluate(omega, sigma)
        v2 = e2.evaluate(omega, sigma)
        counts1[n_red] += v1
        counts2[n_red] += v2
        counts12[n_red] += v1 and v2
    c = len(enum.cells)
    p1 = _poly_at(counts1, n, c, p)
    p2 = _poly_at(counts2, n, c, p)
    p12 = _poly_at(counts12, n, c, p)
    return p12 - p1 * p2


@dataclass(frozen=True)
class RussoResult:
    derivative: Fraction | float
    pivotal_expectation: Fraction | float
    sign: int  # +1 for increasing events, -1 for decreasing


def russo_exact(e: Event, p) -> RussoResult:
    """d/dp P(e) and E[#pivotal sites], both exact, for monotone events.

    The derivative of the exact probability polynomial equals the pivotal
    expectation with the sign of the event's direction in sigma.
    """
    mono = sigma_monotonicity(e)
    if mono == SigmaMonotonicity.NONE:
        raise HypothesisError("event is not monotone in the site colors")
    sign = -1 if mono == SigmaMonotonicity.DECREASING else 1
    sites, cells = e.support()
    enum = _SupportEnumerator(e.domain, sites, cells)
    n = len(enum.sites)
    counts = [0] * (n + 1)
    pivotal = [0] * (n + 1)
    for omega, sigma, n_red in enum:
        base = e.evaluate(omega, sigma)
        counts[n_red] += base
        for x, y in enum.sites:
            sigma[y, x] ^= 1
            if e.evaluate(omega, sigma) != base:
                pivotal[n_red] += 1
            sigma[y, x] ^= 1
    c = len(enum.cells)
    return RussoResult(
        derivative=_poly_derivative_at(counts, n, c, p),
        pivotal_expectation=_poly_at(pivotal, n, c, p),
        sign=sign,
    )
