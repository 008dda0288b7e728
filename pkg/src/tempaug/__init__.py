"""Temporal data augmentation for video clips.

RandAugment-T (RandAugment with per-frame magnitudes), the CutOut / CutMix /
MixUp / CutMixUp families extended along time, and FadeMixUp, operating on
uint8 clips with exact soft-label bookkeeping and seeded, order-independent
randomness.
"""

from .core import Clip, LabelDist, label_mix, linspace
from .erase import cube_cutout, cutout, erase, frame_cutout
from .errors import AugmentError
from .frame_ops import OpKind, apply_geometric, apply_op, apply_photometric, level_to_param
from .masks import MaskKind, MixMask, make_mask
from .mix import (
    MixResult,
    cubecutmix,
    cubecutmixup,
    cutmix,
    cutmix_family,
    cutmixup,
    cutmixup_family,
    fademixup,
    framecutmix,
    framecutmixup,
    mix,
    mixup,
)
from .pipeline import MixMethod, PipelineConfig, augment_sample, baseline
from .randaug import Mode, RandAugConfig, randaugment, randaugment_t, sample_magnitude_range
from .rng import RngStream, rng_derive, sample_beta, sample_uniform

__version__ = "0.1.0"

__all__ = [
    "AugmentError",
    "Clip",
    "LabelDist",
    "MaskKind",
    "MixMask",
    "MixMethod",
    "MixResult",
    "Mode",
    "OpKind",
    "PipelineConfig",
    "RandAugConfig",
    "RngStream",
    "apply_geometric",
    "apply_op",
    "apply_photometric",
    "augment_sample",
    "baseline",
    "cube_cutout",
    "cubecutmix",
    "cubecutmixup",
    "cutmix",
    "cutmix_family",
    "cutmixup",
    "cutmixup_family",
    "cutout",
    "erase",
    "fademixup",
    "frame_cutout",
    "framecutmix",
    "framecutmixup",
    "label_mix",
    "level_to_param",
    "linspace",
    "make_mask",
    "mix",
    "mixup",
    "randaugment",
    "randaugment_t",
    "rng_derive",
    "sample_beta",
    "sample_magnitude_range",
    "sample_uniform",
]
