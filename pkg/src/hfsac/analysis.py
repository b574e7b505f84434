"""Statistical-security and compression metrics.

Entropy, pixel correlations, NPCR/UACI, histograms, a minimal randomness
test subset (monobit, block frequency, runs), compression rates, and the
full image report that ties the codec and the metrics together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .bitio import pack_bits, unpack_bits
from .coder import CoderParams, ac_encode_stream, build_full_fsm
from .crypto import (
    TAG_JUMP,
    TAG_STATE,
    TAG_SWAP,
    KeySchedule,
    SplitMix64,
    StepTrace,
    draw_uniform,
    encrypt,
    substream_init,
)
from .huffman import attach_tables, hfac_encode
from .reducer import fsac_encode, reduce_machine

# fixed seed for the default sampling generator, so reports reproduce
ANALYSIS_SEED = 0x414E414C59534953

_DIRECTIONS = {"horizontal": (1, 0), "vertical": (0, 1), "diagonal": (1, 1)}


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale image, row-major pixel bytes."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {len(self.pixels)}"
            )

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "GrayImage":
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(arr.shape[1], arr.shape[0], arr.tobytes())

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width
        )


def shannon_entropy_binary(bits: str) -> float:
    """Empirical two-symbol entropy of a bit string, in bits per symbol."""
    if not bits:
        raise ValueError("empty bit string")
    ones = bits.count("1")
    h = 0.0
    for count in (ones, len(bits) - ones):
        if count:
            p = count / len(bits)
            h -= p * math.log2(p)
    return h


def pearson_corr(xs, ys) -> float:
    """Correlation coefficient from the discrete mean/variance/covariance forms."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("need two equal-length sequences of at least 2 values")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = float((dx * dx).mean())
    vy = float((dy * dy).mean())
    if vx == 0.0 or vy == 0.0:
        raise ValueError("degenerate sequence")
    return float((dx * dy).mean() / math.sqrt(vx * vy))


def adjacent_pixel_corr(
    img: GrayImage, direction: str, pairs: int = 1000, gen: SplitMix64 | None = None
) -> float:
    """Correlation over randomly sampled adjacent-pixel pairs."""
    try:
        dx, dy = _DIRECTIONS[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}") from None
    cols = img.width - dx
    rows = img.height - dy
    if pairs > cols * rows:
        raise ValueError(f"image too small for {pairs} distinct pairs")
    if gen is None:
        gen = substream_init(ANALYSIS_SEED, TAG_SWAP)
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < pairs:
        p = draw_uniform(gen, cols * rows)
        if p not in seen:
            seen.add(p)
            chosen.append(p)
    arr = img.to_array()
    ys = np.array([p // cols for p in chosen])
    xs = np.array([p % cols for p in chosen])
    return pearson_corr(arr[ys, xs], arr[ys + dy, xs + dx])


def npcr(c1: GrayImage, c2: GrayImage) -> float:
    """Percentage of pixel positions at which the two images differ."""
    if (c1.width, c1.height) != (c2.width, c2.height):
        raise ValueError("image dimensions differ")
    a = c1.to_array()
    b = c2.to_array()
    return float((a != b).mean() * 100.0)


def uaci(c1: GrayImage, c2: GrayImage) -> float:
    """Mean absolute pixel difference as a percentage of 255."""
    if (c1.width, c1.height) != (c2.width, c2.height):
        raise ValueError("image dimensions differ")
    a = c1.to_array().astype(np.int16)
    b = c2.to_array().astype(np.int16)
    return float(np.abs(a - b).mean() / 255.0 * 100.0)


def histogram(img: GrayImage) -> list[int]:
    """Counts per gray level, 256 bins."""
    return np.bincount(img.to_array().ravel(), minlength=256).tolist()


def histogram_chi_square(counts) -> float:
    """Chi-square statistic of a 256-bin histogram against the uniform law."""
    counts = np.asarray(counts, dtype=np.float64)
    expected = counts.sum() / counts.size
    return float(((counts - expected) ** 2 / expected).sum())


def compression_rate(in_bits: int, out_bits: int) -> float:
    """Percent saved: negative when the output is larger than the input."""
    if in_bits <= 0:
        raise ValueError("in_bits must be positive")
    return (1.0 - out_bits / in_bits) * 100.0


def _bit_array(bits: str) -> np.ndarray:
    arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    if arr.max(initial=0) > 1:
        raise ValueError("bit string contains characters other than 0/1")
    return arr


def monobit(bits: str) -> float:
    """Frequency test p-value: erfc(|#1 - #0| / sqrt(2n))."""
    n = len(bits)
    if n < 100:
        raise ValueError("need at least 100 bits")
    arr = _bit_array(bits)
    excess = abs(2 * int(arr.sum()) - n)
    return math.erfc(excess / math.sqrt(2 * n))


def block_frequency(bits: str, m: int = 128) -> float:
    """Block-frequency test p-value over blocks of m bits."""
    n = len(bits)
    if n < m:
        raise ValueError(f"need at least {m} bits")
    arr = _bit_array(bits)
    k = n // m
    pis = arr[: k * m].reshape(k, m).mean(axis=1)
    chi2 = 4.0 * m * float(((pis - 0.5) ** 2).sum())
    return float(gammaincc(k / 2.0, chi2 / 2.0))


def runs(bits: str) -> float:
    """Runs test p-value; 0.0 when the monobit prerequisite fails."""
    n = len(bits)
    if n < 100:
        raise ValueError("need at least 100 bits")
    arr = _bit_array(bits)
    pi = float(arr.mean())
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return 0.0
    v = 1 + int(np.count_nonzero(np.diff(arr)))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return math.erfc(num / den)


def state_visit_histogram(trace: StepTrace, state_count: int) -> list[int]:
    """Visit count per state over an encryption trace."""
    counts = [0] * state_count
    for rec in trace:
        counts[rec.state] += 1
    return counts


def bits_to_image(bits: str, width: int, height: int) -> GrayImage:
    """Pack cipher bits MSB-first and fit them to width x height bytes.

    Shorter payloads tile cyclically; longer ones are truncated.
    """
    data = pack_bits(bits)
    if not data:
        raise ValueError("empty bit stream")
    need = width * height
    if len(data) < need:
        data = (data * (need // len(data) + 1))[:need]
    return GrayImage(width, height, data[:need])


@dataclass
class MetricsReport:
    """Full metric suite for one image/key pair."""

    width: int
    height: int
    plain_entropy: float
    cipher_entropy: float
    plain_corr: dict[str, float]
    cipher_corr: dict[str, float]
    npcr: float
    uaci: float
    plain_histogram: list[int]
    cipher_histogram: list[int]
    cipher_hist_chi2: float
    compression: dict[str, float]
    randomness: dict[str, float]
    key_flip_corr: dict[str, float]
    state_visits: list[int]

    def rows(self) -> list[tuple[str, float]]:
        rows: list[tuple[str, float]] = [
            ("plain_entropy", self.plain_entropy),
            ("cipher_entropy", self.cipher_entropy),
        ]
        for d in _DIRECTIONS:
            rows.append((f"plain_corr_{d}", self.plain_corr[d]))
        for d in _DIRECTIONS:
            rows.append((f"cipher_corr_{d}", self.cipher_corr[d]))
        rows.append(("npcr_pct", self.npcr))
        rows.append(("uaci_pct", self.uaci))
        rows.append(("cipher_hist_chi2", self.cipher_hist_chi2))
        for name, value in sorted(self.compression.items()):
            rows.append((f"compression_{name}_pct", value))
        for name, value in sorted(self.randomness.items()):
            rows.append((f"randomness_{name}_p", value))
        for name, value in sorted(self.key_flip_corr.items()):
            rows.append((f"key_flip_corr_{name}", value))
        visits = [v for v in self.state_visits if v]
        if visits:
            rows.append(("state_visits_min", float(min(visits))))
            rows.append(("state_visits_max", float(max(visits))))
            rows.append(("state_visits_ratio", max(visits) / min(visits)))
        return rows

    def to_csv(self) -> str:
        lines = ["metric,value"]
        lines += [f"{name},{value:.6g}" for name, value in self.rows()]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        width = max(len(name) for name, _ in self.rows())
        return (
            "\n".join(f"{name:<{width}}  {value:.6g}" for name, value in self.rows())
            + "\n"
        )


def compression_rates(bits: str, codec) -> dict[str, float]:
    """AC / FSAC / HFAC output sizes for one input, as percent saved."""
    rm = codec.rm
    n = len(bits)
    return {
        "ac": compression_rate(n, len(ac_encode_stream(bits, rm.params))),
        "fsac": compression_rate(n, len(fsac_encode(bits, rm))),
        "hfac": compression_rate(n, len(hfac_encode(bits, codec))),
    }


def analyze_image(img: GrayImage, params: CoderParams, seed: int) -> MetricsReport:
    """Encrypt an image and compute the full metric suite.

    Covers entropy, plain/cipher correlations, NPCR/UACI under a one-bit
    plaintext flip, randomness of the cipher stream, one-bit key-flip
    correlations confined to single substreams, and state-visit counts.
    """
    rm = reduce_machine(build_full_fsm(params))
    codec = attach_tables(rm)
    plain_bits = unpack_bits(img.pixels)
    ks = KeySchedule(seed, params.jump_q_num)
    cipher, trace = encrypt(plain_bits, codec, ks)
    cipher_img = bits_to_image(cipher, img.width, img.height)

    sample_gen = substream_init(ANALYSIS_SEED, TAG_SWAP)
    plain_corr = {
        d: adjacent_pixel_corr(img, d, gen=sample_gen) for d in _DIRECTIONS
    }
    cipher_corr = {
        d: adjacent_pixel_corr(cipher_img, d, gen=sample_gen) for d in _DIRECTIONS
    }

    # plaintext sensitivity: flip the first bit, same key
    flipped = ("1" if plain_bits[0] == "0" else "0") + plain_bits[1:]
    cipher_flip, _ = encrypt(flipped, codec, ks)
    flip_img = bits_to_image(cipher_flip, img.width, img.height)

    # key sensitivity: one-bit change confined to single substreams
    key_flip_corr: dict[str, float] = {}
    base = _bit_array(cipher)
    for name, tags in (
        ("jump_stream", (TAG_JUMP,)),
        ("state_stream", (TAG_STATE,)),
        ("both", (TAG_JUMP, TAG_STATE)),
    ):
        tweaked = KeySchedule(
            seed, params.jump_q_num, tuple((t, 1) for t in tags)
        )
        other, _ = encrypt(plain_bits, codec, tweaked)
        m = min(len(cipher), len(other))
        key_flip_corr[name] = pearson_corr(base[:m], _bit_array(other)[:m])

    compression = compression_rates(plain_bits, codec)
    compression["hfsac"] = compression_rate(len(plain_bits), len(cipher))

    return MetricsReport(
        width=img.width,
        height=img.height,
        plain_entropy=shannon_entropy_binary(plain_bits),
        cipher_entropy=shannon_entropy_binary(cipher),
        plain_corr=plain_corr,
        cipher_corr=cipher_corr,
        npcr=npcr(cipher_img, flip_img),
        uaci=uaci(cipher_img, flip_img),
        plain_histogram=histogram(img),
        cipher_histogram=histogram(cipher_img),
        cipher_hist_chi2=histogram_chi_square(histogram(cipher_img)),
        compression=compression,
        randomness={
            "monobit": monobit(cipher),
            "block_frequency": block_frequency(cipher),
            "runs": runs(cipher),
        },
        key_flip_corr=key_flip_corr,
        state_visits=state_visit_histogram(trace, rm.state_count),
    )
