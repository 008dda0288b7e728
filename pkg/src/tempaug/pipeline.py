"""End-to-end augmentation of a training sample.

Order: baseline spatial augmentation (scale jitter, random crop, horizontal
flip), then RandAugment-T, then with probability ``mix_prob`` one mixing op
against a caller-supplied partner sample.

All randomness comes from streams ``rng_derive(seed, clip_id, op_index)``:

=========  ===============================
op_index   used for
=========  ===============================
0          baseline of the primary clip
1          RandAugment-T of the primary clip
2          mix gate (one uniform draw)
3          baseline of the partner clip
4          RandAugment-T of the partner clip
5          the mixing op itself
=========  ===============================

The partner is only touched when the gate opens.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .core import Clip, LabelDist
from .errors import ConfigError, InvalidGeometryError
from .mix import MixResult, mix, resolve_method
from .randaug import RandAugConfig, randaugment_clip
from .rng import RngStream, rng_derive

OP_BASELINE_A = 0
OP_RANDAUG_A = 1
OP_MIX_GATE = 2
OP_BASELINE_B = 3
OP_RANDAUG_B = 4
OP_MIX = 5


@dataclass(frozen=True)
class MixMethod:
    name: str
    alpha: float

    def __post_init__(self):
        try:
            object.__setattr__(self, "name", resolve_method(self.name))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not float(self.alpha) > 0:
            raise ConfigError(f"mix alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True)
class PipelineConfig:
    crop_size: int = 160
    jitter_range: tuple[int, int] = (160, 200)
    hflip_prob: float = 0.5
    randaug: RandAugConfig | None = None
    mix_method: MixMethod | None = None
    mix_prob: float = 0.5

    def __post_init__(self):
        lo, hi = (int(v) for v in self.jitter_range)
        object.__setattr__(self, "jitter_range", (lo, hi))
        if self.crop_size < 1:
            raise ConfigError(f"crop_size must be positive, got {self.crop_size}")
        if not self.crop_size <= lo <= hi:
            raise ConfigError(f"need crop_size <= jitter lo <= jitter hi, got {self.crop_size}, {self.jitter_range}")
        for name in ("hflip_prob", "mix_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name}={p} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "crop_size": self.crop_size,
            "jitter_range": list(self.jitter_range),
            "hflip_prob": self.hflip_prob,
            "randaug": self.randaug.to_dict() if self.randaug else None,
            "mix_method": {"name": self.mix_method.name, "alpha": self.mix_method.alpha} if self.mix_method else None,
            "mix_prob": self.mix_prob,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {"crop_size", "jitter_range", "hflip_prob", "randaug", "mix_method", "mix_prob"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if d.get("randaug") is not None:
            d["randaug"] = RandAugConfig.from_dict(d["randaug"])
        if d.get("mix_method") is not None:
            mm = d["mix_method"]
            if set(mm) != {"name", "alpha"}:
                raise ConfigError(f"mix_method needs exactly 'name' and 'alpha', got {sorted(mm)}")
            d["mix_method"] = MixMethod(**mm)
        if "jitter_range" in d:
            d["jitter_range"] = tuple(d["jitter_range"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        try:
            d = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(d)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _axis_weights(src_size: int, dst_size: int, start: int, count: int):
    """Source indices and weights for output positions ``start..start+count``
    of a half-pixel-centred resize from ``src_size`` to ``dst_size``."""
    scale = src_size / dst_size
    pos = (np.arange(start, start + count, dtype=np.float64) + 0.5) * scale - 0.5
    pos = np.clip(pos, 0.0, src_size - 1)
    i0 = np.floor(pos).astype(np.int64)
    i1 = np.minimum(i0 + 1, src_size - 1)
    return i0, i1, (pos - i0).astype(np.float32)


def resize_crop(data: np.ndarray, out_h: int, out_w: int, y0: int, x0: int, crop_h: int, crop_w: int) -> np.ndarray:
    """Window ``[y0:y0+crop_h, x0:x0+crop_w]`` of ``data`` bilinearly resized to
    ``(out_h, out_w)``, computed without materializing the full resize.
    Rows are interpolated first, then columns."""
    _, h, w, _ = data.shape
    r0, r1, fy = _axis_weights(h, out_h, y0, crop_h)
    c0, c1, fx = _axis_weights(w, out_w, x0, crop_w)
    # gather in uint8 and convert only the rows and columns that are used
    if np.any(fy):
        fy = fy.reshape(1, -1, 1, 1)
        rows = data[:, r0].astype(np.float32) * (1.0 - fy) + data[:, r1].astype(np.float32) * fy
    else:
        rows = data[:, r0].astype(np.float32)
    if np.any(fx):
        fx = fx.reshape(1, 1, -1, 1)
        out = rows[:, :, c0] * (1.0 - fx) + rows[:, :, c1] * fx
    else:
        out = rows[:, :, c0]
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def baseline(clip: Clip, cfg: PipelineConfig, rng: RngStream) -> Clip:
    """Scale jitter, random crop and horizontal flip, shared by all frames.

    Draws, in order: the short side (uniform integer in ``jitter_range``), the
    crop row offset, the crop column offset, the flip coin.
    """
    lo, hi = cfg.jitter_range
    short = lo + rng.integers(hi - lo + 1)
    if clip.h <= clip.w:
        new_h, new_w = short, _round_half_up(clip.w * short / clip.h)
    else:
        new_h, new_w = _round_half_up(clip.h * short / clip.w), short
    crop = cfg.crop_size
    if new_h < crop or new_w < crop:
        raise InvalidGeometryError(f"resized clip {new_h}x{new_w} smaller than crop {crop}")
    y0 = rng.integers(new_h - crop + 1)
    x0 = rng.integers(new_w - crop + 1)
    flip = rng.random() < cfg.hflip_prob
    data = resize_crop(clip.data, new_h, new_w, y0, x0, crop, crop)
    if flip:
        data = data[:, :, ::-1]
    return Clip._adopt(data)


def hflip(clip: Clip) -> Clip:
    return Clip._adopt(clip.data[:, :, ::-1])


def _augment_one(clip: Clip, cfg: PipelineConfig, seed: int, clip_id: int, op_baseline: int, op_randaug: int) -> Clip:
    clip = baseline(clip, cfg, rng_derive(seed, clip_id, op_baseline))
    if cfg.randaug is not None:
        clip = randaugment_clip(clip, cfg.randaug, rng_derive(seed, clip_id, op_randaug))
    return clip


def augment_sample(
    a: tuple[Clip, LabelDist],
    b: tuple[Clip, LabelDist] | Callable[[], tuple[Clip, LabelDist]] | None,
    cfg: PipelineConfig,
    seed: int,
    clip_id: int,
) -> MixResult:
    """Augment ``a`` and, when the mix gate opens, mix it with ``b``.

    ``b`` may be a zero-argument callable so that loading the partner is
    skipped entirely when no mixing happens.
    """
    if cfg.mix_method is not None and b is None:
        raise ConfigError("a mixing method is configured but no partner sample was given")
    if cfg.mix_method is None and b is not None:
        raise ConfigError("a partner sample was given but no mixing method is configured")
    clip_a, label_a = a
    clip_a = _augment_one(clip_a, cfg, seed, clip_id, OP_BASELINE_A, OP_RANDAUG_A)
    if cfg.mix_method is None or not rng_derive(seed, clip_id, OP_MIX_GATE).random() < cfg.mix_prob:
        return MixResult(clip_a, label_a, 1.0)
    clip_b, label_b = b() if callable(b) else b
    clip_b = _augment_one(clip_b, cfg, seed, clip_id, OP_BASELINE_B, OP_RANDAUG_B)
    method = cfg.mix_method
    return mix(method.name, clip_a, clip_b, label_a, label_b, method.alpha, rng_derive(seed, clip_id, OP_MIX))
