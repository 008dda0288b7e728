"""Counter-based random streams and the distribution samplers built on them.

Every random decision in the library is drawn from an :class:`RngStream`
derived from ``(seed, clip_id, op_index)``. A stream is a pure function of
those three integers and of how many values have been drawn from it, so two
streams never interfere and results do not depend on scheduling order.

Generator
---------
The three inputs are folded into a 64-bit key with the SplitMix64 finalizer::

    key = mix64(seed + G)
    key = mix64(key ^ mix64(clip_id + 2G))
    key = mix64(key ^ mix64(op_index + 3G))

where ``G = 0x9E3779B97F4A7C15`` and all arithmetic is modulo 2**64. Draw
number ``i`` (starting at 0) is ``mix64(key + (i + 1) * G)``.

Samplers
--------
* uniform reals use the top 53 bits of a draw;
* bounded integers use Lemire's multiply-shift with rejection (exact);
* standard normals use the cosine branch of Box-Muller (two draws each);
* gamma variates use Marsaglia-Tsang squeeze/rejection for shape >= 1 and the
  ``G(a + 1) * U**(1/a)`` boost for shape < 1;
* beta variates are ``X / (X + Y)`` with ``X ~ G(alpha)``, ``Y ~ G(beta)``,
  X drawn first, redrawn in the (underflow-only) case the ratio hits 0 or 1.
"""

from __future__ import annotations

import math

from .errors import InvalidParameterError, InvalidRangeError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """A deterministic stream of 64-bit values.

    Not safe to share between concurrent tasks; derive one stream per
    (clip, op) instead. :meth:`copy` snapshots the current position.
    """

    __slots__ = ("seed", "clip_id", "op_index", "key", "counter")

    def __init__(self, seed: int, clip_id: int, op_index: int):
        self.seed = seed
        self.clip_id = clip_id
        self.op_index = op_index
        key = mix64(seed + GOLDEN)
        key = mix64(key ^ mix64(clip_id + 2 * GOLDEN))
        self.key = mix64(key ^ mix64(op_index + 3 * GOLDEN))
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GOLDEN)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def random_open(self) -> float:
        """Uniform float in the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * _INV_2_53

    def integers(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n < 1:
            raise InvalidRangeError(f"integers() needs n >= 1, got {n}")
        m = self.next_u64() * n
        low = m & MASK64
        if low < n:
            threshold = ((1 << 64) - n) % n
            while low < threshold:
                m = self.next_u64() * n
                low = m & MASK64
        return m >> 64

    def coin(self, p: float) -> bool:
        """True with probability ``p``."""
        return self.random() < p

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct indices from range(n), uniformly (partial Fisher-Yates)."""
        if not 0 <= k <= n:
            raise InvalidRangeError(f"cannot pick {k} distinct items from {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.integers(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def copy(self) -> "RngStream":
        other = RngStream.__new__(RngStream)
        for name in self.__slots__:
            setattr(other, name, getattr(self, name))
        return other

    def __repr__(self):
        return (
            f"RngStream(seed={self.seed}, clip_id={self.clip_id}, "
            f"op_index={self.op_index}, counter={self.counter})"
        )


def rng_derive(seed: int, clip_id: int, op_index: int) -> RngStream:
    return RngStream(seed, clip_id, op_index)


def sample_uniform(rng: RngStream, lo: float, hi: float) -> float:
    """Uniform real in [lo, hi); ``lo == hi`` returns ``lo`` without drawing."""
    if lo > hi:
        raise InvalidRangeError(f"invalid range [{lo}, {hi})")
    if lo == hi:
        return lo
    value = lo + (hi - lo) * rng.random()
    # lo + (hi - lo) * u can round up to hi for u close to 1
    return value if value < hi else math.nextafter(hi, lo)


def sample_normal(rng: RngStream) -> float:
    u1 = rng.random_open()
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def sample_gamma(rng: RngStream, shape: float) -> float:
    """Gamma(shape, 1) variate."""
    if not shape > 0:
        raise InvalidParameterError(f"gamma shape must be positive, got {shape}")
    if shape < 1.0:
        boost = rng.random_open() ** (1.0 / shape)
        return sample_gamma(rng, shape + 1.0) * boost
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = sample_normal(rng)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = rng.random_open()
        if u < 1.0 - 0.0331 * (x * x) * (x * x):
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def sample_beta(rng: RngStream, alpha: float, beta: float) -> float:
    """Beta(alpha, beta) variate strictly inside (0, 1)."""
    if not (alpha > 0 and beta > 0):
        raise InvalidParameterError(f"beta shapes must be positive, got ({alpha}, {beta})")
    while True:
        x = sample_gamma(rng, alpha)
        y = sample_gamma(rng, beta)
        total = x + y
        if total > 0.0:
            value = x / total
            if 0.0 < value < 1.0:
                return value
