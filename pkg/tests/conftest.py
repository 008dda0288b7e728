import numpy as np
import pytest
from hypothesis import strategies as st

from tempaug import Clip, LabelDist


def random_clip(rng: np.random.Generator, t=4, h=16, w=16, c=3, lo=0, hi=256) -> Clip:
    return Clip(rng.integers(lo, hi, (t, h, w, c), dtype=np.uint8))


@pytest.fixture
def nprng():
    return np.random.default_rng(1234)


@pytest.fixture
def labels():
    return LabelDist.one_hot(3, 10), LabelDist.one_hot(7, 10)


@st.composite
def frames(draw, max_side=12, channels=(1, 3)):
    h = draw(st.integers(1, max_side))
    w = draw(st.integers(1, max_side))
    c = draw(st.sampled_from(channels))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).integers(0, 256, (h, w, c), dtype=np.uint8)
