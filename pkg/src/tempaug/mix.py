"""Two-clip mixing: MixUp, FadeMixUp, the CutMix family and the CutMixUp family.

Every op returns a :class:`MixResult` whose label weights equal the share of
each source in the output pixels:

* MixUp blends every sample at ``lam`` and labels ``lam * a + (1 - lam) * b``.
* FadeMixUp ramps the ratio from ``lam - gamma`` on the first frame to
  ``lam + gamma`` on the last; the ramp is symmetric, so the label is MixUp's.
* CutMix pastes ``b`` into a mask of target fraction ``1 - lam``; the label
  uses the mask's realized fraction, not the Beta draw.
* CutMixUp pastes the MixUp blend at ``lam1`` into a mask of fraction
  ``lam2 ~ Beta(2, 2)``; outside the mask the output is ``a`` when
  ``lam1 < 0.5`` and ``b`` otherwise. With realized fraction ``f`` the weight
  of ``a`` is ``lam1 * f`` (``lam1 >= 0.5``) or ``1 - f + lam1 * f``
  (``lam1 < 0.5``).

Mask kinds pick the spatial (CutMix, CutMixUp), temporal (Frame*) or
spatiotemporal (Cube*) variant. Keyword overrides (``lam``, ``gamma``,
``mask`` ...) pin a random quantity instead of drawing it; the remaining draws
happen in the same order as without the override.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Clip, LabelDist, check_same_dims, label_mix, linspace
from .errors import IncompatibleLabelsError, InvalidParameterError
from .masks import MaskKind, MixMask, make_mask
from .rng import RngStream, sample_beta, sample_uniform

CUTMIXUP_MASK_ALPHA = 2.0


@dataclass(frozen=True)
class MixResult:
    clip: Clip
    label: LabelDist
    lambda_used: float
    mask: MixMask | None = None
    fade_gamma: float | None = None
    blend_lambda: float | None = None

    def metadata(self) -> dict:
        meta = {"lambda_used": self.lambda_used}
        if self.mask is not None:
            meta["mask"] = self.mask.to_dict()
        if self.fade_gamma is not None:
            meta["fade_gamma"] = self.fade_gamma
        if self.blend_lambda is not None:
            meta["blend_lambda"] = self.blend_lambda
        return meta


def _check_inputs(a: Clip, b: Clip, label_a: LabelDist, label_b: LabelDist, alpha: float):
    check_same_dims([a, b])
    if label_a.num_classes != label_b.num_classes:
        raise IncompatibleLabelsError(
            f"label class counts differ: {label_a.num_classes} vs {label_b.num_classes}"
        )
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")


def _check_ratio(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name}={value} outside [0, 1]")
    return value


def blend(a: np.ndarray, b: np.ndarray, lam_per_frame) -> np.ndarray:
    """``round(lam * a + (1 - lam) * b)`` with one ratio per frame."""
    lam = np.asarray(lam_per_frame, dtype=np.float64).reshape(-1, 1, 1, 1)
    mixed = lam * a.astype(np.float64) + (1.0 - lam) * b.astype(np.float64)
    return np.clip(np.rint(mixed), 0, 255).astype(np.uint8)


def mixup(a, b, label_a, label_b, alpha: float, rng: RngStream, *, lam: float | None = None) -> MixResult:
    _check_inputs(a, b, label_a, label_b, alpha)
    lam = sample_beta(rng, alpha, alpha) if lam is None else _check_ratio("lam", lam)
    data = blend(a.data, b.data, np.full(a.t, lam))
    return MixResult(Clip._adopt(data), label_mix(label_a, label_b, lam), lam)


def fademixup(
    a, b, label_a, label_b, alpha: float, rng: RngStream, *, lam: float | None = None, gamma: float | None = None
) -> MixResult:
    _check_inputs(a, b, label_a, label_b, alpha)
    lam = sample_beta(rng, alpha, alpha) if lam is None else _check_ratio("lam", lam)
    limit = min(lam, 1.0 - lam)
    if gamma is None:
        gamma = sample_uniform(rng, 0.0, limit)
    elif not 0.0 <= gamma <= limit:
        raise InvalidParameterError(f"gamma={gamma} outside [0, {limit}]")
    ratios = np.clip(linspace(lam - gamma, lam + gamma, a.t), 0.0, 1.0)
    data = blend(a.data, b.data, ratios)
    return MixResult(Clip._adopt(data), label_mix(label_a, label_b, lam), lam, fade_gamma=gamma)


def cutmix_family(
    a,
    b,
    label_a,
    label_b,
    alpha: float,
    kind: MaskKind | str,
    rng: RngStream,
    *,
    lam: float | None = None,
    mask: MixMask | None = None,
    contiguous: bool = False,
) -> MixResult:
    """Paste ``b`` into a mask over ``a`` (CutMix, FrameCutMix, CubeCutMix)."""
    _check_inputs(a, b, label_a, label_b, alpha)
    if mask is None:
        lam = sample_beta(rng, alpha, alpha) if lam is None else _check_ratio("lam", lam)
        mask = make_mask(kind, 1.0 - lam, a.shape[:3], rng, contiguous)
    inside = mask.to_array()[..., None]
    data = np.where(inside, b.data, a.data)
    lambda_used = float(1 - mask.volume_fraction)
    return MixResult(Clip._adopt(data), label_mix(label_a, label_b, lambda_used), lambda_used, mask=mask)


def cutmixup_family(
    a,
    b,
    label_a,
    label_b,
    alpha1: float,
    kind: MaskKind | str,
    rng: RngStream,
    *,
    lam1: float | None = None,
    lam2: float | None = None,
    mask: MixMask | None = None,
    contiguous: bool = False,
) -> MixResult:
    """Paste a MixUp blend into a mask (CutMixUp, FrameCutMixUp, CubeCutMixUp).

    The ``lam1 < 0.5`` label is sometimes written as
    ``(lam1 * lam2 + 1 - lam1) * y_a + (1 - lam1) * lam2 * y_b``, which does
    not sum to one. The weights used here are the pixel shares of the output;
    for ``lam1 >= 0.5`` they coincide with ``lam1 * lam2 * y_a +
    (1 - lam1 * lam2) * y_b``.
    """
    _check_inputs(a, b, label_a, label_b, alpha1)
    lam1 = sample_beta(rng, alpha1, alpha1) if lam1 is None else _check_ratio("lam1", lam1)
    if mask is None:
        if lam2 is None:
            lam2 = sample_beta(rng, CUTMIXUP_MASK_ALPHA, CUTMIXUP_MASK_ALPHA)
        mask = make_mask(kind, _check_ratio("lam2", lam2), a.shape[:3], rng, contiguous)
    blended = blend(a.data, b.data, np.full(a.t, lam1))
    outside = a.data if lam1 < 0.5 else b.data
    data = np.where(mask.to_array()[..., None], blended, outside)
    f = float(mask.volume_fraction)
    weight_a = lam1 * f if lam1 >= 0.5 else min(1.0, (1.0 - f) + lam1 * f)
    return MixResult(
        Clip._adopt(data), label_mix(label_a, label_b, weight_a), weight_a, mask=mask, blend_lambda=lam1
    )


def cutmix(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmix_family(a, b, label_a, label_b, alpha, MaskKind.SPATIAL_BOX, rng, **kw)


def framecutmix(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmix_family(a, b, label_a, label_b, alpha, MaskKind.FRAME_SET, rng, **kw)


def cubecutmix(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmix_family(a, b, label_a, label_b, alpha, MaskKind.CUBE, rng, **kw)


def cutmixup(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmixup_family(a, b, label_a, label_b, alpha, MaskKind.SPATIAL_BOX, rng, **kw)


def framecutmixup(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmixup_family(a, b, label_a, label_b, alpha, MaskKind.FRAME_SET, rng, **kw)


def cubecutmixup(a, b, label_a, label_b, alpha, rng, **kw) -> MixResult:
    return cutmixup_family(a, b, label_a, label_b, alpha, MaskKind.CUBE, rng, **kw)


MIX_METHODS: dict[str, Callable[..., MixResult]] = {
    "mixup": mixup,
    "fademixup": fademixup,
    "cutmix": cutmix,
    "framecutmix": framecutmix,
    "cubecutmix": cubecutmix,
    "cutmixup": cutmixup,
    "framecutmixup": framecutmixup,
    "cubecutmixup": cubecutmixup,
}
# Short names for the blend + cut-and-paste variants.
ALIASES = {"framemixup": "framecutmixup", "cubemixup": "cubecutmixup"}


def resolve_method(name: str) -> str:
    key = name.lower()
    key = ALIASES.get(key, key)
    if key not in MIX_METHODS:
        valid = ", ".join(sorted(MIX_METHODS) + sorted(ALIASES))
        raise InvalidParameterError(f"unknown mix method {name!r}; valid: {valid}")
    return key


def mix(method: str, a, b, label_a, label_b, alpha: float, rng: RngStream, **kw) -> MixResult:
    return MIX_METHODS[resolve_method(method)](a, b, label_a, label_b, alpha, rng, **kw)
