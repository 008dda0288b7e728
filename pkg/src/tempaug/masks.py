"""Region masks: spatial boxes, frame sets, and spatiotemporal cubes.

A :class:`MixMask` is a set of frames crossed with one spatial box, which
covers all three shapes: a spatial box spans every frame, a frame set spans
the whole frame, and a cube is a contiguous frame run crossed with a box.
Its ``volume_fraction`` is an exact :class:`fractions.Fraction`.

Placement along a spatial axis follows CutMix: the box center is uniform over
the axis and the box is clipped to the frame, so boxes near the border come
out smaller. A box at least as long as its axis covers the whole axis.
Temporal windows of a cube start uniformly among the positions that keep
them inside the clip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import InvalidGeometryError, InvalidRangeError
from .rng import RngStream


class MaskKind(str, Enum):
    SPATIAL_BOX = "spatial-box"
    FRAME_SET = "frame-set"
    CUBE = "cube"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class MixMask:
    kind: MaskKind
    dims: tuple[int, int, int]
    frames: tuple[int, ...]
    box: tuple[int, int, int, int]  # y0, y1, x0, x1 (half-open)

    def __post_init__(self):
        t, h, w = self.dims
        y0, y1, x0, x1 = self.box
        if not (0 <= y0 <= y1 <= h and 0 <= x0 <= x1 <= w):
            raise InvalidGeometryError(f"box {self.box} outside a {h}x{w} frame")
        if any(not 0 <= i < t for i in self.frames) or len(set(self.frames)) != len(self.frames):
            raise InvalidGeometryError(f"frame set {self.frames} invalid for t={t}")
        object.__setattr__(self, "frames", tuple(sorted(self.frames)))

    @property
    def area(self) -> int:
        y0, y1, x0, x1 = self.box
        return (y1 - y0) * (x1 - x0)

    @property
    def volume(self) -> int:
        return len(self.frames) * self.area

    @property
    def volume_fraction(self) -> Fraction:
        t, h, w = self.dims
        return Fraction(self.volume, t * h * w)

    def to_array(self) -> np.ndarray:
        """Boolean ``(t, h, w)`` array, True inside the mask."""
        out = np.zeros(self.dims, dtype=bool)
        y0, y1, x0, x1 = self.box
        out[list(self.frames), y0:y1, x0:x1] = True
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "dims": list(self.dims),
            "frames": list(self.frames),
            "box": list(self.box),
            "volume_fraction": str(self.volume_fraction),
        }


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _check_length(name: str, length: int, size: int) -> int:
    if int(length) != length or not 0 <= length <= size:
        raise InvalidGeometryError(f"{name}={length!r} must lie in [0, {size}]")
    return int(length)


def place_centered(size: int, length: int, rng: RngStream) -> tuple[int, int]:
    """Clipped interval of ``length`` around a uniform center; one draw."""
    center = rng.integers(size)
    if length >= size:
        return 0, size
    start = center - length // 2
    return max(0, start), min(size, start + length)


def place_window(size: int, length: int, rng: RngStream) -> tuple[int, int]:
    """Interval of ``length`` fully inside ``[0, size)``; one draw."""
    start = rng.integers(size - length + 1)
    return start, start + length


def box_mask(dims, box_h: int, box_w: int, rng: RngStream) -> MixMask:
    t, h, w = dims
    box_h = _check_length("box_h", box_h, h)
    box_w = _check_length("box_w", box_w, w)
    y0, y1 = place_centered(h, box_h, rng)
    x0, x1 = place_centered(w, box_w, rng)
    return MixMask(MaskKind.SPATIAL_BOX, (t, h, w), tuple(range(t)), (y0, y1, x0, x1))


def frame_mask(dims, n_frames: int, rng: RngStream, contiguous: bool = False) -> MixMask:
    t, h, w = dims
    n_frames = _check_length("n_frames", n_frames, t)
    if contiguous:
        start, stop = place_window(t, n_frames, rng)
        frames = tuple(range(start, stop))
    else:
        frames = tuple(rng.sample(t, n_frames))
    return MixMask(MaskKind.FRAME_SET, (t, h, w), frames, (0, h, 0, w))


def cube_mask(dims, box_h: int, box_w: int, n_frames: int, rng: RngStream) -> MixMask:
    t, h, w = dims
    box_h = _check_length("box_h", box_h, h)
    box_w = _check_length("box_w", box_w, w)
    n_frames = _check_length("n_frames", n_frames, t)
    y0, y1 = place_centered(h, box_h, rng)
    x0, x1 = place_centered(w, box_w, rng)
    start, stop = place_window(t, n_frames, rng)
    return MixMask(MaskKind.CUBE, (t, h, w), tuple(range(start, stop)), (y0, y1, x0, x1))


def make_mask(kind: MaskKind | str, fraction: float, dims, rng: RngStream, contiguous: bool = False) -> MixMask:
    """Mask covering roughly ``fraction`` of the clip volume.

    spatial-box scales both spatial sides by ``sqrt(fraction)``, frame-set
    takes ``round(fraction * t)`` frames, cube scales all three axes by
    ``fraction ** (1/3)``. The realized ``volume_fraction`` is exact and may
    differ from ``fraction`` by rounding and border clipping.
    """
    kind = MaskKind(kind)
    fraction = float(fraction)
    if not 0.0 <= fraction <= 1.0:
        raise InvalidRangeError(f"mask fraction {fraction} outside [0, 1]")
    t, h, w = dims
    if kind is MaskKind.SPATIAL_BOX:
        r = math.sqrt(fraction)
        return box_mask(dims, _round_half_up(h * r), _round_half_up(w * r), rng)
    if kind is MaskKind.FRAME_SET:
        return frame_mask(dims, _round_half_up(fraction * t), rng, contiguous)
    r = fraction ** (1.0 / 3.0)
    return cube_mask(dims, _round_half_up(h * r), _round_half_up(w * r), _round_half_up(t * r), rng)
