from collections import Counter
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_clip
from tempaug import Clip, MaskKind, MixMask, cube_cutout, cutout, erase, frame_cutout, make_mask, rng_derive
from tempaug.errors import InvalidGeometryError, InvalidRangeError
from tempaug.masks import box_mask, cube_mask, frame_mask


def recovered_mask(before: Clip, after: Clip) -> np.ndarray:
    return (before.data != after.data).any(axis=-1)


class TestMakeMask:
    def test_frame_set_quarter(self):
        mask = make_mask("frame-set", 0.25, (64, 16, 16), rng_derive(0, 0, 0))
        assert len(mask.frames) == 16
        assert mask.volume_fraction == Fraction(1, 4)

    def test_full_box(self):
        mask = make_mask(MaskKind.SPATIAL_BOX, 1.0, (3, 10, 12), rng_derive(0, 0, 0))
        assert mask.volume_fraction == 1
        assert mask.to_array().all()

    def test_cube_eighth_interior(self):
        rng = rng_derive(1, 0, 0)
        fractions = [float(make_mask("cube", 0.125, (64, 64, 64), rng).volume_fraction) for _ in range(200)]
        interior = [f for f in fractions if f == max(fractions)]
        assert all(0.11 <= f <= 0.14 for f in interior)
        assert max(fractions) == 0.125

    def test_empty(self):
        for kind in MaskKind:
            assert make_mask(kind, 0.0, (4, 8, 8), rng_derive(0, 0, 0)).volume == 0

    @pytest.mark.parametrize("fraction", [-0.1, 1.5])
    def test_fraction_range(self, fraction):
        with pytest.raises(InvalidRangeError):
            make_mask("cube", fraction, (4, 4, 4), rng_derive(0, 0, 0))

    @settings(max_examples=200, deadline=None)
    @given(
        st.sampled_from(list(MaskKind)),
        st.floats(0, 1),
        st.tuples(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12)),
        st.integers(0, 2**32),
        st.booleans(),
    )
    def test_fraction_is_exact_count(self, kind, fraction, dims, seed, contiguous):
        mask = make_mask(kind, fraction, dims, rng_derive(seed, 0, 0), contiguous)
        arr = mask.to_array()
        assert arr.shape == dims
        assert mask.volume_fraction == Fraction(int(arr.sum()), arr.size)

    def test_contiguous_frames(self):
        rng = rng_derive(2, 0, 0)
        for _ in range(100):
            frames = make_mask("frame-set", 0.4, (10, 2, 2), rng, contiguous=True).frames
            assert list(frames) == list(range(frames[0], frames[0] + 4))

    def test_mask_validates_box(self):
        with pytest.raises(InvalidGeometryError):
            MixMask(MaskKind.SPATIAL_BOX, (1, 4, 4), (0,), (0, 5, 0, 4))


class TestCutOut:
    def test_box_area_and_shared_across_frames(self, nprng):
        clip = random_clip(nprng, t=4, h=160, w=160, lo=1)
        for clip_id in range(20):
            out = cutout(clip, 80, 80, rng_derive(0, clip_id, 0))
            zero = out.data == 0
            k = int(zero[0].all(axis=-1).sum())
            assert k <= 6400
            assert zero.sum() == k * clip.t * clip.c
            assert (zero == zero[:1]).all()

    def test_interior_box_is_full(self, nprng):
        clip = random_clip(nprng, t=2, h=160, w=160, lo=1)
        found = False
        for clip_id in range(50):
            rng = rng_derive(0, clip_id, 0)
            mask = box_mask(clip.shape[:3], 80, 80, rng.copy())
            if mask.area == 6400:
                found = True
                out = cutout(clip, 80, 80, rng)
                assert (out.data == 0).sum() == 6400 * clip.t * clip.c
        assert found

    def test_empty_box(self, nprng):
        clip = random_clip(nprng)
        assert cutout(clip, 0, 0, rng_derive(0, 0, 0)) == clip

    def test_box_too_large(self, nprng):
        with pytest.raises(InvalidGeometryError):
            cutout(random_clip(nprng, h=8, w=8), 9, 4, rng_derive(0, 0, 0))


class TestFrameCutOut:
    def test_sixteen_of_sixty_four(self, nprng):
        clip = random_clip(nprng, t=64, h=8, w=8, lo=1)
        out = frame_cutout(clip, 16, rng_derive(0, 0, 0))
        blank = (out.data == 0).reshape(64, -1).all(axis=1)
        assert blank.sum() == 16
        np.testing.assert_array_equal(out.data[~blank], clip.data[~blank])

    def test_none_and_all(self, nprng):
        clip = random_clip(nprng, t=5)
        assert frame_cutout(clip, 0, rng_derive(0, 0, 0)) == clip
        assert (frame_cutout(clip, 5, rng_derive(0, 0, 0)).data == 0).all()

    def test_too_many(self, nprng):
        with pytest.raises(InvalidGeometryError):
            frame_cutout(random_clip(nprng, t=3), 4, rng_derive(0, 0, 0))

    def test_pairs_uniform(self):
        rng = rng_derive(3, 0, 0)
        counts = Counter(frame_mask((8, 1, 1), 2, rng).frames for _ in range(50_000))
        assert set(counts) == set(combinations(range(8), 2))
        for pair in counts:
            assert abs(counts[pair] / 50_000 - 1 / 28) <= 0.005


class TestCubeCutOut:
    def test_volume_bound(self, nprng):
        clip = random_clip(nprng, t=64, h=160, w=160, c=1, lo=1)
        for clip_id in range(10):
            rng = rng_derive(0, clip_id, 0)
            mask = cube_mask(clip.shape[:3], 80, 80, 16, rng.copy())
            out = cube_cutout(clip, 80, 80, 16, rng)
            zeros = int((out.data == 0).sum())
            assert zeros == mask.area * 16 <= 80 * 80 * 16
            frames = np.nonzero((out.data == 0).any(axis=(1, 2, 3)))[0]
            assert list(frames) == list(range(frames[0], frames[0] + 16))

    def test_empty(self, nprng):
        clip = random_clip(nprng)
        assert cube_cutout(clip, 0, 0, 0, rng_derive(0, 0, 0)) == clip


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["box", "frames", "cube"]))
def test_diff_recovers_mask_and_idempotent(seed, which):
    clip = random_clip(np.random.default_rng(seed), t=6, h=12, w=10, lo=1)
    dims = clip.shape[:3]
    rng = rng_derive(seed, 0, 0)
    if which == "box":
        mask = box_mask(dims, 5, 7, rng)
    elif which == "frames":
        mask = frame_mask(dims, 2, rng)
    else:
        mask = cube_mask(dims, 5, 4, 3, rng)
    out = erase(clip, mask)
    np.testing.assert_array_equal(recovered_mask(clip, out), mask.to_array())
    assert erase(out, mask) == out


def test_erase_dim_mismatch(nprng):
    mask = make_mask("cube", 0.5, (2, 2, 2), rng_derive(0, 0, 0))
    with pytest.raises(InvalidGeometryError):
        erase(random_clip(nprng, t=3, h=2, w=2), mask)
