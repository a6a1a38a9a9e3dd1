"""Cluster structure, crossings, circuits, and the exact self-duality check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import crossing_full, label_components
from .geometry import Axis, Color, RectDomain, Site, check_grids


@dataclass(frozen=True)
class ClusterLabeling:
    """Per-site cluster ids for one color; -1 marks sites of the other color.

    Ids are the flat row-major index of the smallest member site, so equal
    inputs give byte-identical labelings.
    """

    domain: RectDomain
    color: Color
    labels: np.ndarray  # shape (sites_h, sites_w), int64

    def label_of(self, s: Site) -> int:
        x, y = s
        return int(self.labels[y, x])

    def same_cluster(self, a: Site, b: Site) -> bool:
        la, lb = self.label_of(a), self.label_of(b)
        return la >= 0 and la == lb


def _full_masks(d: RectDomain) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.ones((d.sites_h, d.sites_w), dtype=np.bool_),
        np.ones((d.cells_h, d.cells_w), dtype=np.bool_),
    )


def build_clusters(
    omega: np.ndarray,
    sigma: np.ndarray,
    d: RectDomain,
    color: Color,
    site_mask: np.ndarray | None = None,
    cell_mask: np.ndarray | None = None,
) -> ClusterLabeling:
    """Label the monochromatic clusters of ``color``.

    Optional masks restrict to a sub-complex: sites outside ``site_mask`` are
    ignored, lattice edges must border an active cell and diagonals must lie
    in one.
    """
    check_grids(omega, sigma, d)
    if site_mask is None or cell_mask is None:
        fs, fc = _full_masks(d)
        site_mask = fs if site_mask is None else site_mask
        cell_mask = fc if cell_mask is None else cell_mask
    labels = label_components(
        np.ascontiguousarray(sigma, dtype=np.uint8),
        np.ascontiguousarray(omega, dtype=np.uint8),
        int(color),
        np.ascontiguousarray(site_mask, dtype=np.bool_),
        np.ascontiguousarray(cell_mask, dtype=np.bool_),
    )
    return ClusterLabeling(domain=d, color=color, labels=labels)


def has_crossing(
    omega: np.ndarray, sigma: np.ndarray, d: RectDomain, color: Color, axis: Axis
) -> bool:
    """Is there a ``color`` path joining the two opposite arcs of ``axis``?"""
    check_grids(omega, sigma, d)
    return bool(
        crossing_full(
            np.ascontiguousarray(sigma, dtype=np.uint8),
            np.ascontiguousarray(omega, dtype=np.uint8),
            int(color),
            int(axis),
        )
    )


def check_duality(omega: np.ndarray, sigma: np.ndarray, d: RectDomain) -> bool:
    """(red left-right crossing) XOR (blue top-bottom crossing).

    In a triangulation exactly one of the two occurs; callers treat a False
    return as a correctness failure of the engine.
    """
    red_lr = has_crossing(omega, sigma, d, Color.RED, Axis.LEFT_RIGHT)
    blue_tb = has_crossing(omega, sigma, d, Color.BLUE, Axis.TOP_BOTTOM)
    return red_lr != blue_tb


@dataclass(frozen=True)
class Annulus:
    """Co-centered squares of 4n x 4n (inner) and 6n x 6n (outer) cells.

    The ambient domain is the outer square; the closed annulus keeps the
    sites on the inner square's boundary.
    """

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("annulus scale n must be >= 1")

    @property
    def domain(self) -> RectDomain:
        return RectDomain(6 * self.n, 6 * self.n)

    @property
    def inner_lo(self) -> int:
        return self.n

    @property
    def inner_hi(self) -> int:
        return 5 * self.n

    def site_mask(self) -> np.ndarray:
        d = self.domain
        m = np.ones((d.sites_h, d.sites_w), dtype=np.bool_)
        lo, hi = self.inner_lo, self.inner_hi
        m[lo + 1 : hi, lo + 1 : hi] = False
        return m

    def cell_mask(self) -> np.ndarray:
        d = self.domain
        m = np.ones((d.cells_h, d.cells_w), dtype=np.bool_)
        lo, hi = self.inner_lo, self.inner_hi
        m[lo:hi, lo:hi] = False
        return m

    def inner_boundary_mask(self) -> np.ndarray:
        d = self.domain
        m = np.zeros((d.sites_h, d.sites_w), dtype=np.bool_)
        lo, hi = self.inner_lo, self.inner_hi
        m[lo, lo : hi + 1] = True
        m[hi, lo : hi + 1] = True
        m[lo : hi + 1, lo] = True
        m[lo : hi + 1, hi] = True
        return m

    def outer_boundary_mask(self) -> np.ndarray:
        d = self.domain
        m = np.zeros((d.sites_h, d.sites_w), dtype=np.bool_)
        m[0, :] = True
        m[-1, :] = True
        m[:, 0] = True
        m[:, -1] = True
        return m


def has_radial_connection(
    omega: np.ndarray, sigma: np.ndarray, ann: Annulus, color: Color
) -> bool:
    """Is the inner boundary joined to the outer one by a ``color`` path?"""
    labeling = build_clusters(
        omega, sigma, ann.domain, color, ann.site_mask(), ann.cell_mask()
    )
    inner = labeling.labels[ann.inner_boundary_mask()]
    outer = labeling.labels[ann.outer_boundary_mask()]
    inner = inner[inner >= 0]
    outer = outer[outer >= 0]
    if inner.size == 0 or outer.size == 0:
        return False
    return bool(np.isin(inner, outer).any())


def has_circuit(
    omega: np.ndarray, sigma: np.ndarray, ann: Annulus, color: Color
) -> bool:
    """Is there a ``color`` cycle in the closed annulus surrounding the hole?

    Computed through the annulus self-duality: a circuit exists exactly when
    no opposite-colored path joins the inner boundary to the outer one. The
    independent winding-number oracle in the test suite validates this on
    small instances.
    """
    check_grids(omega, sigma, ann.domain)
    return not has_radial_connection(omega, sigma, ann, color.other)
