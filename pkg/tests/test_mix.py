from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_clip
from oracles import blend_ratios, provenance_weight_a
from tempaug import (
    Clip,
    LabelDist,
    MaskKind,
    cutmix,
    cutmix_family,
    cutmixup,
    cutmixup_family,
    fademixup,
    make_mask,
    mix,
    mixup,
    rng_derive,
)
from tempaug.errors import IncompatibleClipsError, IncompatibleLabelsError, InvalidParameterError
from tempaug.masks import MixMask
from tempaug.mix import ALIASES, MIX_METHODS, resolve_method

YA = LabelDist.one_hot(3, 10)
YB = LabelDist.one_hot(7, 10)


def disjoint_pair(seed, t=8, h=16, w=16):
    rng = np.random.default_rng(seed)
    return random_clip(rng, t, h, w, 3, 0, 100), random_clip(rng, t, h, w, 3, 156, 256)


def const(value, t=4, h=4, w=4):
    return Clip(np.full((t, h, w, 3), value, dtype=np.uint8))


class TestMixUp:
    def test_lambda_one(self):
        a, b = disjoint_pair(0)
        out = mixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=1.0)
        assert out.clip == a and out.label == YA

    def test_half(self):
        out = mixup(const(200), const(100), YA, YB, 2.0, rng_derive(0, 0, 0), lam=0.5)
        assert (out.clip.data == 150).all()
        assert out.label == LabelDist(10, {3: 0.5, 7: 0.5})

    def test_mean_pixel(self):
        for seed in range(20):
            a, b = disjoint_pair(seed)
            out = mixup(a, b, YA, YB, 2.0, rng_derive(seed, 0, 0))
            lam = out.lambda_used
            expected = lam * a.data.mean() + (1 - lam) * b.data.mean()
            assert abs(out.clip.data.mean() - expected) <= 0.5

    def test_incompatible(self):
        a, b = disjoint_pair(0)
        with pytest.raises(IncompatibleClipsError):
            mixup(a, random_clip(np.random.default_rng(0), t=2), YA, YB, 2.0, rng_derive(0, 0, 0))
        with pytest.raises(IncompatibleLabelsError):
            mixup(a, b, YA, LabelDist.one_hot(0, 11), 2.0, rng_derive(0, 0, 0))
        with pytest.raises(InvalidParameterError):
            mixup(a, b, YA, YB, 0.0, rng_derive(0, 0, 0))


class TestFadeMixUp:
    def test_zero_gamma_is_mixup(self):
        for seed in range(100):
            a, b = disjoint_pair(seed)
            lam = float(np.random.default_rng(seed).random())
            fade = fademixup(a, b, YA, YB, 2.0, rng_derive(seed, 0, 0), lam=lam, gamma=0.0)
            plain = mixup(a, b, YA, YB, 2.0, rng_derive(seed, 0, 0), lam=lam)
            assert fade.clip == plain.clip and fade.label == plain.label

    def test_full_ramp_two_frames(self):
        a, b = const(200, t=2), const(100, t=2)
        out = fademixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=0.5, gamma=0.5)
        np.testing.assert_array_equal(out.clip.data[0], b.data[0])
        np.testing.assert_array_equal(out.clip.data[1], a.data[1])
        assert out.label == LabelDist(10, {3: 0.5, 7: 0.5})

    def test_gamma_bounds(self):
        a, b = disjoint_pair(0)
        with pytest.raises(InvalidParameterError):
            fademixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=0.3, gamma=0.31)
        rng = rng_derive(1, 0, 0)
        for _ in range(500):
            out = fademixup(a, b, YA, YB, 2.0, rng)
            assert 0 <= out.fade_gamma <= min(out.lambda_used, 1 - out.lambda_used)


class TestCutMix:
    def test_empty_mask(self):
        a, b = disjoint_pair(0)
        out = cutmix(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=1.0)
        assert out.clip == a and out.label == YA

    def test_frame_label_is_frame_count(self):
        a, b = disjoint_pair(0)
        rng = rng_derive(2, 0, 0)
        for _ in range(100):
            out = cutmix_family(a, b, YA, YB, 2.0, "frame-set", rng)
            assert out.label[7] == pytest.approx(len(out.mask.frames) / a.t, abs=1e-12)

    def test_provenance_exact(self):
        for seed in range(50):
            a, b = disjoint_pair(seed)
            for kind in MaskKind:
                out = cutmix_family(a, b, YA, YB, 2.0, kind, rng_derive(seed, 1, 0))
                from_b = Fraction(int((out.clip.data >= 156).sum()), out.clip.data.size)
                assert from_b == 1 - Fraction(out.lambda_used)
                assert out.lambda_used == float(1 - out.mask.volume_fraction)

    def test_single_frame_is_image_cutmix(self):
        a, b = disjoint_pair(3, t=1, h=32, w=32)
        out = cutmix(a, b, YA, YB, 1.0, rng_derive(0, 0, 0), lam=0.6)
        y0, y1, x0, x1 = out.mask.box
        assert out.label[3] == pytest.approx(1 - (y1 - y0) * (x1 - x0) / 1024)

    def test_complement_symmetry(self):
        a, b = disjoint_pair(4)
        rng = rng_derive(5, 0, 0)
        for _ in range(50):
            mask = make_mask("frame-set", 0.3, a.shape[:3], rng)
            rest = tuple(i for i in range(a.t) if i not in mask.frames)
            comp = MixMask(MaskKind.FRAME_SET, mask.dims, rest, mask.box)
            ab = cutmix_family(a, b, YA, YB, 2.0, "frame-set", rng, mask=mask)
            ba = cutmix_family(b, a, YB, YA, 2.0, "frame-set", rng, mask=comp)
            assert ab.clip == ba.clip and ab.label == ba.label


class TestCutMixUp:
    def test_full_mask_is_mixup(self):
        for seed in range(20):
            a, b = disjoint_pair(seed)
            lam = float(np.random.default_rng(seed).random())
            for kind in MaskKind:
                out = cutmixup_family(a, b, YA, YB, 2.0, kind, rng_derive(0, 0, 0), lam1=lam, lam2=1.0)
                plain = mixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=lam)
                assert out.clip == plain.clip
                assert out.label == plain.label

    def test_empty_mask_high_lambda_is_b(self):
        a, b = disjoint_pair(1)
        out = cutmixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam1=0.7, lam2=0.0)
        assert out.clip == b and out.label == YB

    def test_label_example(self):
        a, b = disjoint_pair(2)
        out = cutmixup_family(a, b, YA, YB, 2.0, "frame-set", rng_derive(0, 0, 0), lam1=0.6, lam2=0.5)
        assert out.mask.volume_fraction == Fraction(1, 2)
        assert out.label[3] == pytest.approx(0.30)
        assert out.label[7] == pytest.approx(0.70)
        assert provenance_weight_a(out.clip.data, a.data, b.data, [0.6] * a.t) == pytest.approx(0.30, abs=1e-12)

    def test_low_lambda_label_sums_to_one(self):
        a, b = disjoint_pair(3)
        out = cutmixup_family(a, b, YA, YB, 2.0, "frame-set", rng_derive(0, 0, 0), lam1=0.2, lam2=0.5)
        # outside the mask is A; inside A has share 0.2
        assert out.label[3] == pytest.approx(0.5 + 0.2 * 0.5)
        assert sum(out.label.weights.values()) == pytest.approx(1.0)
        assert provenance_weight_a(out.clip.data, a.data, b.data, [0.2] * a.t) == pytest.approx(0.6, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from(list(MaskKind)), st.integers(1, 255).filter(lambda k: k != 128))
    def test_swap_symmetry(self, seed, kind, k):
        a, b = disjoint_pair(seed % 1000, t=4, h=8, w=8)
        lam = k / 256  # dyadic, so 1 - (1 - lam) == lam exactly
        mask = make_mask(kind, 0.4, a.shape[:3], rng_derive(seed, 0, 0))
        ab = cutmixup_family(a, b, YA, YB, 2.0, kind, rng_derive(0, 0, 0), lam1=lam, mask=mask)
        ba = cutmixup_family(b, a, YB, YA, 2.0, kind, rng_derive(0, 0, 0), lam1=1 - lam, mask=mask)
        assert ab.clip == ba.clip
        assert ab.label[3] == pytest.approx(ba.label[3], abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 256))
def test_mixup_swap_symmetry(seed, k):
    a, b = disjoint_pair(seed % 1000, t=3, h=6, w=6)
    lam = k / 256
    ab = mixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=lam)
    ba = mixup(b, a, YB, YA, 2.0, rng_derive(0, 0, 0), lam=1 - lam)
    assert ab.clip == ba.clip and ab.label == ba.label


def test_fademixup_swap_symmetry_reverses_time():
    # swapping the clips flips the sign of the ramp; on time-reversed inputs
    # it is the same op again
    for seed in range(30):
        a, b = disjoint_pair(seed, t=9)
        lam, gamma = 0.625, 0.25
        ab = fademixup(a, b, YA, YB, 2.0, rng_derive(0, 0, 0), lam=lam, gamma=gamma)
        rev = lambda c: Clip(c.data[::-1])
        ba = fademixup(rev(b), rev(a), YB, YA, 2.0, rng_derive(0, 0, 0), lam=1 - lam, gamma=gamma)
        assert rev(ba.clip) == ab.clip
        assert ab.label == ba.label


@pytest.mark.parametrize("method", sorted(MIX_METHODS))
def test_provenance_matches_label(method):
    tol = 1 / (8 * 16 * 16) + 1e-6
    for seed in range(30):
        a, b = disjoint_pair(seed)
        out = mix(method, a, b, YA, YB, 2.0, rng_derive(seed, 0, 5))
        measured = provenance_weight_a(out.clip.data, a.data, b.data, blend_ratios(out, a.t))
        assert abs(measured - out.label[3]) <= tol


def test_aliases_and_unknown():
    for alias, target in ALIASES.items():
        assert resolve_method(alias) == target
    assert resolve_method("CutMix") == "cutmix"
    with pytest.raises(InvalidParameterError, match="valid"):
        resolve_method("blend")


def test_metadata_serializable():
    import json

    a, b = disjoint_pair(0)
    for method in MIX_METHODS:
        json.dumps(mix(method, a, b, YA, YB, 2.0, rng_derive(0, 0, 0)).metadata())
