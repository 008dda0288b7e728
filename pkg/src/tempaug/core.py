"""Core value types: clips, sparse soft labels, and small numeric helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    IncompatibleClipsError,
    IncompatibleLabelsError,
    InvalidCountError,
    InvalidParameterError,
)

LABEL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Clip:
    """A ``(t, h, w, c)`` volume of uint8 pixels, frame-major and channel-last.

    A writeable input array is copied and the copy made read-only, so a clip
    never changes after construction.
    """

    data: np.ndarray

    def __post_init__(self):
        data = self.data
        if not isinstance(data, np.ndarray) or data.dtype != np.uint8:
            raise InvalidParameterError("clip data must be a uint8 numpy array")
        if data.ndim != 4:
            raise InvalidParameterError(f"clip data must be 4-d (t, h, w, c), got shape {data.shape}")
        t, h, w, c = data.shape
        if min(t, h, w) < 1:
            raise InvalidParameterError(f"clip dims must be >= 1, got {data.shape}")
        if c not in (1, 3):
            raise InvalidParameterError(f"clip channels must be 1 or 3, got {c}")
        if data.flags.writeable or not data.flags.c_contiguous:
            data = np.array(data, order="C")
            data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def _adopt(cls, data: np.ndarray) -> "Clip":
        """Wrap an array built for this clip alone, skipping the defensive copy."""
        data = np.ascontiguousarray(data)
        data.flags.writeable = False
        return cls(data)

    @classmethod
    def from_bytes(cls, payload: bytes, t: int, h: int, w: int, c: int) -> "Clip":
        expected = t * h * w * c
        if len(payload) != expected:
            raise InvalidParameterError(f"payload has {len(payload)} bytes, expected {expected}")
        return cls(np.frombuffer(payload, dtype=np.uint8).reshape(t, h, w, c))

    @property
    def t(self) -> int:
        return self.data.shape[0]

    @property
    def h(self) -> int:
        return self.data.shape[1]

    @property
    def w(self) -> int:
        return self.data.shape[2]

    @property
    def c(self) -> int:
        return self.data.shape[3]

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.data.shape

    def tobytes(self) -> bytes:
        return self.data.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Clip):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self):
        return f"Clip(t={self.t}, h={self.h}, w={self.w}, c={self.c})"


@dataclass(frozen=True)
class LabelDist:
    """Sparse class -> weight distribution.

    Zero weights are dropped on construction, so ``support`` only lists the
    classes that actually carry mass.
    """

    num_classes: int
    weights: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.num_classes, (int, np.integer)) or self.num_classes < 1:
            raise InvalidParameterError(f"num_classes must be a positive integer, got {self.num_classes!r}")
        cleaned = {}
        for k, v in self.weights.items():
            k = int(k)
            v = float(v)
            if not 0 <= k < self.num_classes:
                raise InvalidParameterError(f"class index {k} outside [0, {self.num_classes})")
            if not (0.0 <= v <= 1.0 + LABEL_TOLERANCE):
                raise InvalidParameterError(f"weight {v} for class {k} outside [0, 1]")
            if v > 0.0:
                cleaned[k] = min(v, 1.0)
        total = sum(cleaned.values())
        if abs(total - 1.0) > LABEL_TOLERANCE:
            raise InvalidParameterError(f"label weights sum to {total!r}, expected 1")
        object.__setattr__(self, "num_classes", int(self.num_classes))
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(cleaned.items()))))

    @classmethod
    def one_hot(cls, index: int, num_classes: int) -> "LabelDist":
        return cls(num_classes, {index: 1.0})

    def __getitem__(self, index: int) -> float:
        return self.weights.get(index, 0.0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.weights)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.num_classes)
        for k, v in self.weights.items():
            out[k] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, LabelDist):
            return NotImplemented
        return self.num_classes == other.num_classes and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.num_classes, tuple(self.weights.items())))


def label_mix(a: LabelDist, b: LabelDist, weight_a: float) -> LabelDist:
    """Convex combination ``weight_a * a + (1 - weight_a) * b``."""
    if a.num_classes != b.num_classes:
        raise IncompatibleLabelsError(f"label class counts differ: {a.num_classes} vs {b.num_classes}")
    weight_a = float(weight_a)
    if not 0.0 <= weight_a <= 1.0:
        raise InvalidParameterError(f"mixing weight {weight_a} outside [0, 1]")
    weight_b = 1.0 - weight_a
    mixed = {}
    for k in set(a.weights) | set(b.weights):
        v = weight_a * a[k] + weight_b * b[k]
        if v > 0.0:
            mixed[k] = v
    return LabelDist(a.num_classes, mixed)


def linspace(start: float, stop: float, n: int) -> np.ndarray:
    """``n`` evenly spaced values; the endpoints are reproduced exactly."""
    if int(n) != n or n < 1:
        raise InvalidCountError(f"linspace needs n >= 1, got {n!r}")
    return np.linspace(float(start), float(stop), int(n))


def check_same_dims(clips: Iterable[Clip]):
    shapes = {clip.shape for clip in clips}
    if len(shapes) > 1:
        raise IncompatibleClipsError(f"clips have different dims: {sorted(shapes)}")
