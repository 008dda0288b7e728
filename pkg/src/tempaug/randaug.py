"""Clip-level RandAugment and its temporally varying form, RandAugment-T.

RandAugment-T draws ``n`` ops (uniformly, with replacement) and one direction
per op, then applies the ops in sequence. Each op sees a per-frame magnitude
schedule that ramps linearly from ``m1`` on the first frame to ``m2`` on the
last, so a rotation can drift like a panning camera and a brightness change
can fade in. With ``m1 == m2`` it reduces to ordinary frame-wise RandAugment.

Stream consumption is fixed: for each op, one integer draw picks the kind and
one uniform draw picks the sign (+1 if below 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Clip, linspace
from .errors import ConfigError, InvalidLevelError
from .frame_ops import ALL_OPS, MAX_LEVEL, OpKind, apply_op, apply_op_frames
from .rng import RngStream, sample_uniform

TEMPORAL_MIN_M1 = 0.1


class Mode(str, Enum):
    SPATIAL = "spatial"
    TEMPORAL = "temporal"
    TEMPORAL_PLUS = "temporal+"
    MIX = "mix"

    def __str__(self):
        return self.value


def _check_m(m: float) -> float:
    m = float(m)
    if not 0.0 <= m <= MAX_LEVEL:
        raise InvalidLevelError(f"magnitude {m} outside [0, {MAX_LEVEL:g}]")
    return m


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ConfigError(f"op count must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class RandAugConfig:
    n: int = 2
    mode: Mode = Mode.TEMPORAL_PLUS
    m: float = 5.0

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "m", _check_m(self.m))

    def to_dict(self) -> dict:
        return {"n": self.n, "mode": self.mode.value, "m": self.m}

    @classmethod
    def from_dict(cls, d: dict) -> "RandAugConfig":
        unknown = set(d) - {"n", "mode", "m"}
        if unknown:
            raise ConfigError(f"unknown randaug keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except ValueError as exc:
            raise ConfigError(f"bad randaug config: {exc}") from exc


def sample_magnitude_range(mode: Mode | str, m: float, rng: RngStream) -> tuple[float, float]:
    """Endpoint magnitudes ``(m1, m2)`` for one clip.

    * spatial: ``(m, m)``
    * temporal: ``m2 = m`` and ``m1 ~ U(0.1, m2)`` (``m1 = m`` when ``m < 0.1``)
    * temporal+: ``delta ~ U(0, m / 2)``, ``(m - delta, m + delta)`` clamped to [0, 10]
    * mix: a fair coin picks spatial or temporal+
    """
    mode = Mode(mode)
    m = _check_m(m)
    if mode is Mode.MIX:
        mode = Mode.SPATIAL if rng.random() < 0.5 else Mode.TEMPORAL_PLUS
    if mode is Mode.SPATIAL:
        return m, m
    if mode is Mode.TEMPORAL:
        return sample_uniform(rng, min(TEMPORAL_MIN_M1, m), m), m
    delta = sample_uniform(rng, 0.0, 0.5 * m)
    return max(0.0, m - delta), min(MAX_LEVEL, m + delta)


def draw_ops(n: int, rng: RngStream) -> list[tuple[OpKind, int]]:
    ops = []
    for _ in range(_check_n(n)):
        kind = ALL_OPS[rng.integers(len(ALL_OPS))]
        sign = 1 if rng.random() < 0.5 else -1
        ops.append((kind, sign))
    return ops


def apply_ops(clip: Clip, ops, schedule) -> Clip:
    """Apply ``(kind, sign)`` ops in sequence, frame ``i`` at ``schedule[i]``."""
    schedule = [_check_m(level) for level in schedule]
    if len(schedule) != clip.t:
        raise ConfigError(f"schedule has {len(schedule)} levels for {clip.t} frames")
    frames = clip.data
    for kind, sign in ops:
        frames = apply_op_frames(frames, kind, schedule, sign)
    return Clip._adopt(frames)


def randaugment_t(clip: Clip, n: int, m1: float, m2: float, rng: RngStream) -> Clip:
    m1, m2 = _check_m(m1), _check_m(m2)
    ops = draw_ops(n, rng)
    return apply_ops(clip, ops, linspace(m1, m2, clip.t))


def randaugment(clip: Clip, n: int, m: float, rng: RngStream) -> Clip:
    """Plain RandAugment applied frame by frame at a constant magnitude."""
    m = _check_m(m)
    ops = draw_ops(n, rng)
    frames = []
    for frame in clip.data:
        for kind, sign in ops:
            frame = apply_op(frame, kind, m, sign)
        frames.append(frame)
    return Clip._adopt(np.stack(frames))


def randaugment_clip(clip: Clip, config: RandAugConfig, rng: RngStream) -> Clip:
    """Sample the magnitude range for ``config.mode``, then run RandAugment-T."""
    m1, m2 = sample_magnitude_range(config.mode, config.m, rng)
    return randaugment_t(clip, config.n, m1, m2, rng)
