"""The fourteen RandAugment operations on uint8 frames.

Each op takes a magnitude ``level`` on a 0-10 scale plus a direction ``sign``
and maps it linearly to a concrete parameter (see :func:`level_to_param`).
Photometric arithmetic is float64 and bilinear resampling float32; results
are rounded half-to-even and clamped to [0, 255].

The kernels work on a stack of frames ``(t, h, w, c)`` with one level per
frame, which is how RandAugment-T applies a temporally varying magnitude. The
single-frame functions are thin wrappers over a stack of one. Per-frame
parameters are computed with scalar ``math`` calls so that a frame gives the
same bytes whether it is processed alone or inside a stack.

Fixed choices:

* geometric ops map about the frame center ``((w-1)/2, (h-1)/2)`` with
  bilinear sampling; samples outside the frame read mid-gray 128;
  positive rotation is counter-clockwise on screen, positive shear/translate
  moves content right/down, translations are whole pixels;
* ``color`` and ``contrast`` use ITU-R 601 luma ``0.299 R + 0.587 G + 0.114 B``;
* ``sharpness`` blends toward a 3x3 smoothing of weights 1 (8 neighbours) and
  5 (centre), divided by 13; the one-pixel border keeps its original values;
* ``equalize`` uses the cumulative-histogram lookup
  ``lut[v] = (step // 2 + #{p < v}) // step`` with
  ``step = (N - count of the largest occurring value) // 255``, per channel;
  a channel with ``step == 0`` is left unchanged;
* ``autocontrast`` maps each channel's min to 0 and max to 255.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidLevelError, InvalidParameterError, WrongOpClassError

MAX_LEVEL = 10.0
FILL_VALUE = 128.0


class OpKind(str, Enum):
    IDENTITY = "identity"
    AUTOCONTRAST = "autocontrast"
    EQUALIZE = "equalize"
    ROTATE = "rotate"
    SHEAR_X = "shear-x"
    SHEAR_Y = "shear-y"
    TRANSLATE_X = "translate-x"
    TRANSLATE_Y = "translate-y"
    SOLARIZE = "solarize"
    COLOR = "color"
    POSTERIZE = "posterize"
    CONTRAST = "contrast"
    BRIGHTNESS = "brightness"
    SHARPNESS = "sharpness"

    def __str__(self):
        return self.value


# Sampling order: RandAugment draws an index into this tuple.
ALL_OPS = tuple(OpKind)
GEOMETRIC = frozenset(
    {OpKind.ROTATE, OpKind.SHEAR_X, OpKind.SHEAR_Y, OpKind.TRANSLATE_X, OpKind.TRANSLATE_Y}
)
PHOTOMETRIC = frozenset(
    {
        OpKind.SOLARIZE,
        OpKind.COLOR,
        OpKind.POSTERIZE,
        OpKind.CONTRAST,
        OpKind.BRIGHTNESS,
        OpKind.SHARPNESS,
    }
)
PARAMETERLESS = frozenset({OpKind.IDENTITY, OpKind.AUTOCONTRAST, OpKind.EQUALIZE})
ENHANCE = frozenset({OpKind.BRIGHTNESS, OpKind.COLOR, OpKind.CONTRAST, OpKind.SHARPNESS})


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _check_level(level: float) -> float:
    level = float(level)
    if not 0.0 <= level <= MAX_LEVEL:
        raise InvalidLevelError(f"level {level} outside [0, {MAX_LEVEL:g}]")
    return level


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise InvalidParameterError(f"sign must be +1 or -1, got {sign!r}")
    return int(sign)


def level_to_param(kind: OpKind | str, level: float, sign: int = 1, size: int | None = None):
    """Concrete parameter of ``kind`` at ``level``.

    ==================  ===========================================  ===========
    op                  parameter                                    at level 10
    ==================  ===========================================  ===========
    rotate              degrees ``sign * 3 * level``                 +-30
    shear-x / shear-y   shear factor ``sign * 0.03 * level``         +-0.3
    translate-x / -y    pixels ``sign * round(0.03 * level * size)`` +-30 %
    enhance ops         factor ``1 + sign * 0.09 * level``           0.1 / 1.9
    posterize           kept bits ``8 - round(0.4 * level)``         4
    solarize            threshold ``256 - round(25.6 * level)``      0
    ==================  ===========================================  ===========

    ``size`` (the frame width for translate-x, height for translate-y) is
    required by the translations. Parameterless ops return ``None``.
    """
    kind = OpKind(kind)
    level = _check_level(level)
    sign = _check_sign(sign)
    if kind is OpKind.ROTATE:
        return sign * 3.0 * level
    if kind in (OpKind.SHEAR_X, OpKind.SHEAR_Y):
        return sign * 0.03 * level
    if kind in (OpKind.TRANSLATE_X, OpKind.TRANSLATE_Y):
        if size is None:
            raise InvalidParameterError(f"{kind} needs the frame size")
        return sign * _round_half_up(0.03 * level * size)
    if kind in ENHANCE:
        return 1.0 + sign * 0.09 * level
    if kind is OpKind.POSTERIZE:
        return 8 - _round_half_up(0.4 * level)
    if kind is OpKind.SOLARIZE:
        return 256 - _round_half_up(25.6 * level)
    return None


def _to_uint8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)


def _luma(frames: np.ndarray) -> np.ndarray:
    """Float luma with a trailing channel axis of 1."""
    x = frames.astype(np.float64)
    if frames.shape[-1] == 1:
        return x
    return 0.299 * x[..., 0:1] + 0.587 * x[..., 1:2] + 0.114 * x[..., 2:3]


def _blend(degenerate: np.ndarray, frames: np.ndarray, factors: np.ndarray) -> np.ndarray:
    f = factors.reshape(-1, 1, 1, 1)
    return _to_uint8(degenerate * (1.0 - f) + frames.astype(np.float64) * f)


def _smooth(frames: np.ndarray) -> np.ndarray:
    out = frames.astype(np.float64)
    if frames.shape[1] < 3 or frames.shape[2] < 3:
        return out
    # integer accumulation is exact; one division per pixel
    x = frames.astype(np.int32)
    acc = 5 * x[:, 1:-1, 1:-1]
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dy == 1 and dx == 1:
                continue
            acc += x[:, dy : dy + x.shape[1] - 2, dx : dx + x.shape[2] - 2]
    out[:, 1:-1, 1:-1] = acc / 13.0
    return out


def equalize_lut(channel: np.ndarray) -> np.ndarray | None:
    """Lookup table equalizing one uint8 channel, or None if it is left as is."""
    hist = np.bincount(channel.ravel(), minlength=256)
    nonzero = hist[hist > 0]
    step = (int(nonzero.sum()) - int(nonzero[-1])) // 255
    if step == 0:
        return None
    below = np.cumsum(hist) - hist
    lut = (below + step // 2) // step
    return np.minimum(lut, 255).astype(np.uint8)


def _equalize(frames: np.ndarray) -> np.ndarray:
    out = frames.copy()
    for i in range(frames.shape[0]):
        for ch in range(frames.shape[3]):
            lut = equalize_lut(frames[i, :, :, ch])
            if lut is not None:
                out[i, :, :, ch] = lut[frames[i, :, :, ch]]
    return out


def _autocontrast(frames: np.ndarray) -> np.ndarray:
    out = frames.copy()
    for i in range(frames.shape[0]):
        for ch in range(frames.shape[3]):
            channel = frames[i, :, :, ch]
            lo, hi = int(channel.min()), int(channel.max())
            if hi > lo:
                stretched = (channel.astype(np.float64) - lo) * 255.0 / (hi - lo)
                out[i, :, :, ch] = _to_uint8(stretched)
    return out


def _photometric(frames: np.ndarray, kind: OpKind, levels: Sequence[float], sign: int) -> np.ndarray:
    if kind is OpKind.IDENTITY:
        return frames.copy()
    if kind is OpKind.EQUALIZE:
        return _equalize(frames)
    if kind is OpKind.AUTOCONTRAST:
        return _autocontrast(frames)
    params = [level_to_param(kind, level, sign) for level in levels]
    if kind is OpKind.POSTERIZE:
        masks = np.array([(0xFF << (8 - bits)) & 0xFF for bits in params], dtype=np.uint8)
        return frames & masks.reshape(-1, 1, 1, 1)
    if kind is OpKind.SOLARIZE:
        thresholds = np.array(params, dtype=np.int16).reshape(-1, 1, 1, 1)
        return np.where(frames >= thresholds, 255 - frames, frames).astype(np.uint8)

    factors = np.array(params, dtype=np.float64)
    if kind is OpKind.BRIGHTNESS:
        degenerate = np.zeros(frames.shape)
    elif kind is OpKind.COLOR:
        degenerate = np.broadcast_to(_luma(frames), frames.shape)
    elif kind is OpKind.CONTRAST:
        luma = _luma(frames)
        means = np.array([float(np.mean(luma[i])) for i in range(frames.shape[0])])
        degenerate = np.broadcast_to(means.reshape(-1, 1, 1, 1), frames.shape)
    else:
        degenerate = _smooth(frames)
    return _blend(degenerate, frames, factors)


def _inverse_affine(kind: OpKind, param) -> tuple[float, float, float, float, float, float]:
    """Coefficients ``(ax, bx, tx, ay, by, ty)`` mapping centered output
    coordinates ``(dx, dy)`` to source offsets ``ax*dx + bx*dy - tx`` and
    ``ay*dx + by*dy - ty``."""
    if kind is OpKind.ROTATE:
        theta = math.radians(param)
        cos, sin = math.cos(theta), math.sin(theta)
        return cos, -sin, 0.0, sin, cos, 0.0
    if kind is OpKind.SHEAR_X:
        return 1.0, param, 0.0, 0.0, 1.0, 0.0
    if kind is OpKind.SHEAR_Y:
        return 1.0, 0.0, 0.0, param, 1.0, 0.0
    if kind is OpKind.TRANSLATE_X:
        return 1.0, 0.0, float(param), 0.0, 1.0, 0.0
    return 1.0, 0.0, 0.0, 0.0, 1.0, float(param)


def _shift(frames: np.ndarray, axis: int, offsets: Sequence[int]) -> np.ndarray:
    """Whole-pixel translation; same bytes as the bilinear path at integer offsets."""
    out = np.full_like(frames, int(FILL_VALUE))
    n = frames.shape[axis + 1]
    for i, d in enumerate(offsets):
        if abs(d) >= n:
            continue
        src = [slice(None)] * 3
        dst = [slice(None)] * 3
        src[axis] = slice(max(0, -d), n - max(0, d))
        dst[axis] = slice(max(0, d), n - max(0, -d))
        out[i][tuple(dst)] = frames[i][tuple(src)]
    return out


def _geometric(frames: np.ndarray, kind: OpKind, levels: Sequence[float], sign: int, fast: bool = True) -> np.ndarray:
    t, h, w, c = frames.shape
    size = w if kind is OpKind.TRANSLATE_X else h
    if fast and kind in (OpKind.TRANSLATE_X, OpKind.TRANSLATE_Y):
        offsets = [level_to_param(kind, level, sign, size) for level in levels]
        return _shift(frames, 1 if kind is OpKind.TRANSLATE_X else 0, offsets)
    coeffs = np.array(
        [_inverse_affine(kind, level_to_param(kind, level, sign, size)) for level in levels]
    ).reshape(t, 6, 1, 1)
    ax, bx, tx, ay, by, ty = (coeffs[:, k] for k in range(6))
    cx, cy = (w - 1) / 2.0, (h - 1) / 2.0
    dx = (np.arange(w, dtype=np.float64) - cx).reshape(1, 1, w)
    dy = (np.arange(h, dtype=np.float64) - cy).reshape(1, h, 1)
    xs = ax * dx + bx * dy + (cx - tx)
    ys = ay * dx + by * dy + (cy - ty)

    outside = (xs < -1.0) | (xs > w) | (ys < -1.0) | (ys > h)
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = (xs - x0)[..., None].astype(np.float32)
    fy = (ys - y0)[..., None].astype(np.float32)
    # padded frame: index 0 and size+1 hold the fill value
    xi = np.clip(x0.astype(np.int64) + 1, 0, w + 1)
    yi = np.clip(y0.astype(np.int64) + 1, 0, h + 1)
    xj = np.minimum(xi + 1, w + 1)
    yj = np.minimum(yi + 1, h + 1)

    padded = np.full((t, h + 2, w + 2, c), int(FILL_VALUE), dtype=np.uint8)
    padded[:, 1:-1, 1:-1] = frames
    flat = padded.reshape(-1, c)
    base = np.arange(t).reshape(t, 1, 1) * (h + 2)

    def gather(yy, xx):
        rows = ((base + yy) * (w + 2) + xx).ravel()
        return np.take(flat, rows, axis=0).reshape(t, h, w, c).astype(np.float32)

    # An axis whose fractional weights are all zero contributes v * 1 + v' * 0,
    # which equals v exactly, so skipping it does not change any output byte.
    interp_x = bool(np.any(fx))
    interp_y = bool(np.any(fy))

    def row(yy):
        if interp_x:
            return gather(yy, xi) * (1.0 - fx) + gather(yy, xj) * fx
        return gather(yy, xi)

    values = row(yi) * (1.0 - fy) + row(yj) * fy if interp_y else row(yi)
    values[outside] = FILL_VALUE
    return _to_uint8(values)


def _check_frames(frames: np.ndarray) -> np.ndarray:
    frames = np.asarray(frames)
    if frames.dtype != np.uint8 or frames.ndim != 4:
        raise InvalidParameterError(f"expected a uint8 (t, h, w, c) stack, got {frames.dtype} {frames.shape}")
    return frames


def apply_op_frames(frames: np.ndarray, kind: OpKind | str, levels: Sequence[float], sign: int = 1) -> np.ndarray:
    """Apply ``kind`` to each frame of a ``(t, h, w, c)`` stack at its own level."""
    kind = OpKind(kind)
    frames = _check_frames(frames)
    levels = [_check_level(level) for level in levels]
    if len(levels) != frames.shape[0]:
        raise InvalidParameterError(f"{len(levels)} levels for {frames.shape[0]} frames")
    sign = _check_sign(sign)
    if kind in GEOMETRIC:
        return _geometric(frames, kind, levels, sign)
    return _photometric(frames, kind, levels, sign)


def apply_photometric(frame: np.ndarray, kind: OpKind | str, level: float = 0.0, sign: int = 1) -> np.ndarray:
    """Photometric or parameterless op on one ``(h, w, c)`` frame."""
    kind = OpKind(kind)
    if kind in GEOMETRIC:
        raise WrongOpClassError(f"{kind} is geometric; use apply_geometric")
    return apply_op_frames(np.asarray(frame)[None], kind, [level], sign)[0]


def apply_geometric(frame: np.ndarray, kind: OpKind | str, level: float, sign: int = 1) -> np.ndarray:
    """Geometric op on one ``(h, w, c)`` frame."""
    kind = OpKind(kind)
    if kind not in GEOMETRIC:
        raise WrongOpClassError(f"{kind} is not geometric; use apply_photometric")
    return apply_op_frames(np.asarray(frame)[None], kind, [level], sign)[0]


def apply_op(frame: np.ndarray, kind: OpKind | str, level: float = 0.0, sign: int = 1) -> np.ndarray:
    return apply_op_frames(np.asarray(frame)[None], kind, [level], sign)[0]
