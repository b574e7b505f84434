import math
from fractions import Fraction
from functools import lru_cache

import pytest

from hfsac import (
    CoderParams,
    GrayImage,
    SplitMix64,
    attach_tables,
    bernoulli_bits,
    build_full_fsm,
    reduce_machine,
)

# parameter grid shared by the property suites: every (n, p0_num, f_max)
# combination the package promises to handle well
SWEEP = [
    (n, p0, fm)
    for n in range(3, 9)
    for p0 in sorted({1, int(0.2 * (1 << n)), int(0.44 * (1 << n)), 1 << (n - 1)})
    for fm in (1, 3)
]


def rand_bits(seed: int, n: int, p_zero: float = 0.5) -> str:
    return bernoulli_bits(SplitMix64(seed), n, p_zero)


def is_prefix_free(codes) -> bool:
    codes = sorted(codes)
    return not any(
        codes[i + 1].startswith(codes[i]) for i in range(len(codes) - 1)
    )


def kraft(codes) -> Fraction:
    return sum(Fraction(1, 1 << len(c)) for c in codes)


@lru_cache(maxsize=None)
def _depth_multisets(n: int):
    """Sorted leaf-depth tuples of every full binary tree with n leaves."""
    if n == 1:
        return frozenset({(0,)})
    out = set()
    for left in range(1, n):
        for dl in _depth_multisets(left):
            for dr in _depth_multisets(n - left):
                out.add(tuple(sorted(d + 1 for d in dl + dr)))
    return frozenset(out)


def optimal_expected_length(weights) -> Fraction:
    """Brute force over all prefix-code shapes: the oracle for optimality."""
    ws = sorted(weights, reverse=True)
    best = None
    for depths in _depth_multisets(len(ws)):
        cost = sum(w * d for w, d in zip(ws, depths))
        if best is None or cost < best:
            best = cost
    return best


class _CodecCache:
    def __init__(self):
        self._machines = {}
        self._reduced = {}
        self._codecs = {}

    def machine(self, n, p0, fm, q=0):
        key = (n, p0, fm, q)
        if key not in self._machines:
            self._machines[key] = build_full_fsm(CoderParams(n, p0, fm, q))
        return self._machines[key]

    def reduced(self, n, p0, fm, q=0):
        key = (n, p0, fm, q)
        if key not in self._reduced:
            self._reduced[key] = reduce_machine(self.machine(n, p0, fm, q))
        return self._reduced[key]

    def codec(self, n, p0, fm, q=0):
        key = (n, p0, fm, q)
        if key not in self._codecs:
            self._codecs[key] = attach_tables(self.reduced(n, p0, fm, q))
        return self._codecs[key]


@pytest.fixture(scope="session")
def cache():
    return _CodecCache()


def synthetic_image(width: int = 256, height: int = 256) -> GrayImage:
    """Deterministic smooth test image: strongly correlated neighbors."""
    px = bytearray()
    for y in range(height):
        for x in range(width):
            v = (
                128
                + 60 * math.sin(2 * math.pi * x / 71) * math.sin(2 * math.pi * y / 83)
                + 24 * math.sin(2 * math.pi * (x + y) / 47)
            )
            px.append(min(max(int(v), 0), 255))
    return GrayImage(width, height, bytes(px))


@pytest.fixture(scope="session")
def test_image():
    return synthetic_image()
