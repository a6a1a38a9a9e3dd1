import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triperc.geometry import (
    CellType,
    Color,
    Diag,
    FlipEffect,
    RectDomain,
    classify_cell,
    classify_cell_grid,
    diagonal_neighbor,
    dump_config,
    flip_increases,
    neighbors,
    parse_config,
)

R, B = Color.RED, Color.BLUE


class TestClassifyCell:
    def test_all_blue_is_neutral(self):
        assert classify_cell(B, B, B, B) == CellType.N

    def test_red_antidiagonal_is_type_a(self):
        # NE and SW red, NW and SE blue: the NESW diagonal joins a red pair
        assert classify_cell(nw=B, ne=R, sw=R, se=B) == CellType.A

    def test_three_red_blue_at_ne_is_type_b(self):
        assert classify_cell(nw=R, ne=B, sw=R, se=R) == CellType.B

    def test_census_6_5_5(self, all_16_colorings):
        counts = {t: 0 for t in CellType}
        for nw, ne, sw, se in all_16_colorings:
            counts[classify_cell(nw, ne, sw, se)] += 1
        assert counts == {CellType.N: 6, CellType.A: 5, CellType.B: 5}

    def test_horizontal_mirror_swaps_a_and_b(self, all_16_colorings):
        # NW<->NE, SW<->SE exchanges the two diagonals
        swap = {CellType.A: CellType.B, CellType.B: CellType.A, CellType.N: CellType.N}
        for nw, ne, sw, se in all_16_colorings:
            assert classify_cell(ne, nw, se, sw) == swap[classify_cell(nw, ne, sw, se)]

    def test_color_swap_swaps_a_and_b(self, all_16_colorings):
        swap = {CellType.A: CellType.B, CellType.B: CellType.A, CellType.N: CellType.N}
        for nw, ne, sw, se in all_16_colorings:
            flipped = classify_cell(nw.other, ne.other, sw.other, se.other)
            assert flipped == swap[classify_cell(nw, ne, sw, se)]

    def test_grid_matches_scalar(self):
        rng = np.random.default_rng(7)
        sigma = rng.integers(0, 2, size=(5, 9), dtype=np.uint8)
        grid = classify_cell_grid(sigma)
        for cy in range(4):
            for cx in range(8):
                expected = classify_cell(
                    nw=Color(int(sigma[cy + 1, cx])),
                    ne=Color(int(sigma[cy + 1, cx + 1])),
                    sw=Color(int(sigma[cy, cx])),
                    se=Color(int(sigma[cy, cx + 1])),
                )
                assert grid[cy, cx] == expected


class TestFlipIncreases:
    def test_neutral_for_type_n(self):
        assert flip_increases(CellType.N, Diag.NWSE, Diag.NESW) == FlipEffect.NEUTRAL

    def test_type_a_up_flip_increases(self):
        assert flip_increases(CellType.A, Diag.NWSE, Diag.NESW) == FlipEffect.INCREASES

    def test_type_b_up_flip_decreases(self):
        assert flip_increases(CellType.B, Diag.NWSE, Diag.NESW) == FlipEffect.DECREASES

    def test_reverse_flip_negates(self):
        for t in CellType:
            fwd = flip_increases(t, Diag.NWSE, Diag.NESW)
            rev = flip_increases(t, Diag.NESW, Diag.NWSE)
            assert int(fwd) == -int(rev)

    def test_identity_flip_rejected(self):
        with pytest.raises(ValueError):
            flip_increases(CellType.A, Diag.NWSE, Diag.NWSE)


class TestNeighbors:
    def test_corner_nwse_cell(self):
        d = RectDomain(1, 1)
        omega = np.array([[int(Diag.NWSE)]], dtype=np.uint8)
        assert set(neighbors((0, 0), d, omega)) == {(1, 0), (0, 1)}

    def test_corner_nesw_cell(self):
        d = RectDomain(1, 1)
        omega = np.array([[int(Diag.NESW)]], dtype=np.uint8)
        assert set(neighbors((0, 0), d, omega)) == {(1, 0), (0, 1), (1, 1)}

    def test_interior_degree_six_all_nesw(self):
        d = RectDomain(2, 2)
        omega = np.ones((2, 2), dtype=np.uint8)
        got = set(neighbors((1, 1), d, omega))
        assert got == {(0, 1), (2, 1), (1, 0), (1, 2), (0, 0), (2, 2)}

    def test_outside_domain_rejected(self):
        d = RectDomain(2, 2)
        with pytest.raises(ValueError):
            neighbors((3, 0), d, np.zeros((2, 2), dtype=np.uint8))

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_symmetry(self, data):
        w = data.draw(st.integers(1, 4))
        h = data.draw(st.integers(1, 4))
        d = RectDomain(w, h)
        omega = np.array(
            data.draw(
                st.lists(
                    st.lists(st.integers(0, 1), min_size=w, max_size=w),
                    min_size=h,
                    max_size=h,
                )
            ),
            dtype=np.uint8,
        )
        for s in d.sites():
            for t in neighbors(s, d, omega):
                assert s in neighbors(t, d, omega)

    def test_no_duplicates(self):
        d = RectDomain(3, 3)
        for bits in range(16):
            omega = np.array(
                [[bits & 1, (bits >> 1) & 1], [(bits >> 2) & 1, (bits >> 3) & 1]],
                dtype=np.uint8,
            )
            omega = np.tile(omega, (2, 2))[:3, :3]
            for s in d.sites():
                ns = neighbors(s, d, omega)
                assert len(ns) == len(set(ns))


class TestDiagonalNeighbor:
    def test_nesw_joins_sw_ne(self):
        assert diagonal_neighbor((0, 0), (0, 0), Diag.NESW) == (1, 1)
        assert diagonal_neighbor((1, 1), (0, 0), Diag.NESW) == (0, 0)
        assert diagonal_neighbor((1, 0), (0, 0), Diag.NESW) is None

    def test_nwse_joins_nw_se(self):
        assert diagonal_neighbor((0, 1), (0, 0), Diag.NWSE) == (1, 0)
        assert diagonal_neighbor((0, 0), (0, 0), Diag.NWSE) is None

    def test_non_corner_rejected(self):
        with pytest.raises(ValueError):
            diagonal_neighbor((5, 5), (0, 0), Diag.NWSE)


class TestDomain:
    def test_degenerate_sizes_rejected(self):
        with pytest.raises(ValueError):
            RectDomain(0, 3)
        with pytest.raises(ValueError):
            RectDomain(3, RectDomain.MAX_SIDE + 1)

    def test_arc_sites_share_corners(self):
        d = RectDomain(3, 2)
        left = set(d.arc_sites(0, 0))
        top = set(d.arc_sites(1, 0))
        assert (0, 2) in left and (0, 2) in top  # corner owned by both arcs
        assert len(left) == d.sites_h and len(top) == d.sites_w


class TestDumpParse:
    def test_roundtrip(self):
        rng = np.random.default_rng(3)
        for w, h in ((1, 1), (3, 2), (5, 5)):
            d = RectDomain(w, h)
            omega = rng.integers(0, 2, size=(h, w), dtype=np.uint8)
            sigma = rng.integers(0, 2, size=(h + 1, w + 1), dtype=np.uint8)
            om2, sg2, d2 = parse_config(dump_config(omega, sigma, d))
            assert d2 == d
            assert np.array_equal(om2, omega)
            assert np.array_equal(sg2, sigma)

    def test_known_layout(self):
        # top site row first; sigma[0] is the bottom row
        d = RectDomain(1, 1)
        omega = np.array([[1]], dtype=np.uint8)
        sigma = np.array([[1, 0], [0, 1]], dtype=np.uint8)
        assert dump_config(omega, sigma, d) == "BR\nRB\n/\n"

    def test_bad_text_rejected(self):
        with pytest.raises(ValueError):
            parse_config("RB\nRX\n\\\n")
        with pytest.raises(ValueError):
            parse_config("RB\n\\\n/\n")


def test_sixteen_colorings_cover_every_type(all_16_colorings):
    assert len(all_16_colorings) == 16
    assert {classify_cell(*c) for c in all_16_colorings} == set(CellType)
