"""Counter-based deterministic sampling of colors and diagonals.

Every random value is a pure function of ``(seed, replicate, stream, x, y)``
through a 64-bit mixing chain, so lazily revealing a single site during an
exploration and eagerly materializing the whole grid give bit-identical
values, and replicates can be evaluated in any order or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Color, Diag, RectDomain

_MASK = (1 << 64) - 1

_STREAM_COLOR = 0x636F6C6F72  # "color"
_STREAM_DIAG = 0x64696167  # "diag"


@dataclass(frozen=True)
class SamplerKey:
    seed: int
    replicate: int = 0

    def __post_init__(self) -> None:
        if self.replicate < 0:
            raise ValueError("replicate index must be nonnegative")


def _fmix64(z: int) -> int:
    # murmur3 finalizer
    z ^= z >> 33
    z = (z * 0xFF51AFD7ED558CCD) & _MASK
    z ^= z >> 33
    z = (z * 0xC4CEB9FE1A85EC53) & _MASK
    z ^= z >> 33
    return z


def _word(key: SamplerKey, stream: int, x: int, y: int) -> int:
    h = _fmix64(key.seed & _MASK)
    for v in (key.replicate, stream, x & _MASK, y & _MASK):
        h = _fmix64(h ^ v)
    return h


def _fmix64_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(33))
    z = z * np.uint64(0xFF51AFD7ED558CCD)
    z = z ^ (z >> np.uint64(33))
    z = z * np.uint64(0xC4CEB9FE1A85EC53)
    z = z ^ (z >> np.uint64(33))
    return z


def _word_grid(key: SamplerKey, stream: int, w: int, h: int) -> np.ndarray:
    base = _fmix64(key.seed & _MASK)
    for v in (key.replicate, stream):
        base = _fmix64(base ^ v)
    xs = np.arange(w, dtype=np.uint64)[None, :]
    ys = np.arange(h, dtype=np.uint64)[:, None]
    hx = _fmix64_np(np.uint64(base) ^ xs)
    return _fmix64_np(hx ^ ys)


def _red_threshold(p: float) -> int:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return int(round(float(p) * 2.0**64))


def sample_color(key: SamplerKey, p: float, x: int, y: int) -> Color:
    """Color of site ``(x, y)``: red with probability ``p``, iid over sites."""
    return Color(_word(key, _STREAM_COLOR, x, y) < _red_threshold(p))


def sample_diagonal(key: SamplerKey, x: int, y: int) -> Diag:
    """Orientation of cell ``(x, y)``: fair coin, iid over cells."""
    return Diag(_word(key, _STREAM_DIAG, x, y) >> 63)


def color_grid(key: SamplerKey, p: float, d: RectDomain) -> np.ndarray:
    """Eagerly sampled color grid, elementwise equal to :func:`sample_color`."""
    words = _word_grid(key, _STREAM_COLOR, d.sites_w, d.sites_h)
    thr = _red_threshold(p)
    if thr > _MASK:
        return np.ones(words.shape, dtype=np.uint8)
    return (words < np.uint64(thr)).astype(np.uint8)


def diag_grid(key: SamplerKey, d: RectDomain) -> np.ndarray:
    """Eagerly sampled diagonal grid, elementwise equal to :func:`sample_diagonal`."""
    words = _word_grid(key, _STREAM_DIAG, d.cells_w, d.cells_h)
    return (words >> np.uint64(63)).astype(np.uint8)
