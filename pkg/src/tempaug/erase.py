"""Deletion augmentations: CutOut, FrameCutOut and CubeCutOut.

Each op draws a mask (see :mod:`tempaug.masks`) and zero-fills it. The same
spatial box is used in every frame for CutOut; FrameCutOut blanks whole
frames; CubeCutOut blanks a box over a contiguous run of frames.
"""

from __future__ import annotations

from .core import Clip
from .errors import InvalidGeometryError
from .masks import MixMask, box_mask, cube_mask, frame_mask
from .rng import RngStream

# Defaults sized for 160x160 crops of 64 frames.
DEFAULT_BOX = 80
DEFAULT_FRAMES = 16
FILL = 0


def erase(clip: Clip, mask: MixMask, fill: int = FILL) -> Clip:
    if mask.dims != clip.shape[:3]:
        raise InvalidGeometryError(f"mask dims {mask.dims} do not match clip {clip.shape[:3]}")
    data = clip.data.copy()
    data[mask.to_array()] = fill
    return Clip._adopt(data)


def cutout(clip: Clip, box_h: int, box_w: int, rng: RngStream) -> Clip:
    return erase(clip, box_mask(clip.shape[:3], box_h, box_w, rng))


def frame_cutout(clip: Clip, n_frames: int, rng: RngStream, contiguous: bool = False) -> Clip:
    return erase(clip, frame_mask(clip.shape[:3], n_frames, rng, contiguous))


def cube_cutout(clip: Clip, box_h: int, box_w: int, n_frames: int, rng: RngStream) -> Clip:
    return erase(clip, cube_mask(clip.shape[:3], box_h, box_w, n_frames, rng))
