"""Keyed encryption layer: keystream, state jumps, swap transforms.

One 64-bit seed feeds three independent splitmix substreams: J decides
whether a step jumps, S picks the jump target, W picks the per-step swap
position.  Encoder and decoder derive identical substreams from the seed,
so their draws stay aligned step for step.

The keystream is deliberately a plain splitmix recurrence, not a CSPRNG:
it is bit-exact and cheap to reproduce anywhere, and the scheme's security
rests on seed secrecy (known-plaintext attacks are out of scope).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import exp, lgamma, log2, sqrt

from .huffman import HfsacCodec, swap_codeword

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

TAG_JUMP = 1
TAG_STATE = 2
TAG_SWAP = 3


class KeyFormatError(ValueError):
    """Key text is not 16 lowercase hex characters."""


class WrongKeyError(ValueError):
    """Cipher bits match no codeword: wrong key or corrupt stream."""


class TruncatedStreamError(ValueError):
    """Cipher ended mid-codeword."""


class SplitMix64:
    """Deterministic 64-bit generator (splitmix recurrence)."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def substream_init(seed: int, tag: int) -> SplitMix64:
    """Substream generator for one key role; pure function of (seed, tag)."""
    return SplitMix64((seed ^ (tag * GOLDEN)) & MASK64)


def draw_bernoulli(gen: SplitMix64, q_num: int) -> bool:
    """True with probability q_num / 256; consumes exactly one draw."""
    return (gen.next_u64() >> 56) < q_num


def draw_uniform(gen: SplitMix64, m: int) -> int:
    """Integer in [0, m); modulo bias is negligible for the small m used here."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return gen.next_u64() % m


def bernoulli_bits(gen: SplitMix64, n: int, p_zero: float) -> str:
    """n i.i.d. bits with P('0') = p_zero, for benchmarks and tests."""
    threshold = min(max(round(p_zero * (1 << 64)), 0), 1 << 64)
    return "".join("0" if gen.next_u64() < threshold else "1" for _ in range(n))


def seed_from_hex(text: str) -> int:
    """Parse a 16-lowercase-hex-character key (optional trailing newline)."""
    text = text.rstrip("\n")
    if len(text) != 16 or text.strip("0123456789abcdef"):
        raise KeyFormatError("key must be 16 lowercase hex characters")
    return int(text, 16)


def seed_to_hex(seed: int) -> str:
    return format(seed & MASK64, "016x")


@dataclass(frozen=True)
class KeySchedule:
    """Symmetric secret plus jump rate.

    Substreams are derived fresh per session, so a schedule may be reused;
    `tweaks` XORs a mask into chosen substream init states and exists for
    key-sensitivity experiments (a one-bit change confined to one role).
    """

    seed: int
    jump_q_num: int
    tweaks: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= self.jump_q_num <= 256:
            raise ValueError(f"jump_q_num must be in 0..256, got {self.jump_q_num}")

    def substream(self, tag: int) -> SplitMix64:
        state = (self.seed ^ (tag * GOLDEN)) & MASK64
        for t, mask in self.tweaks:
            if t == tag:
                state ^= mask & MASK64
        return SplitMix64(state)


@dataclass(frozen=True)
class StepRecord:
    """What one encryption step did; `transition` indexes the state's rows."""

    jumped: bool
    state: int
    transition: int
    swap_pos: int


StepTrace = tuple[StepRecord, ...]


def encrypt(plain: str, codec: HfsacCodec, ks: KeySchedule) -> tuple[str, StepTrace]:
    """Encrypt a bit string; returns (cipher bits, per-step trace).

    Per step: draw the jump flag (the first step always jumps), on a jump
    draw the target state, draw the swap position, parse one input block,
    emit the swapped codeword.  The draw order is fixed so the decoder can
    mirror it exactly.
    """
    rm = codec.rm
    gen_jump = ks.substream(TAG_JUMP)
    gen_state = ks.substream(TAG_STATE)
    gen_swap = ks.substream(TAG_SWAP)
    out: list[str] = []
    trace: list[StepRecord] = []
    pos = 0
    n = len(plain)
    carried = 0
    first = True
    while pos < n:
        jumped = draw_bernoulli(gen_jump, ks.jump_q_num) or first
        state = draw_uniform(gen_state, rm.state_count) if jumped else carried
        table = codec.tables[state]
        swap_pos = draw_uniform(gen_swap, table.max_len + 1)
        idx, length = rm.match(state, plain, pos)
        out.append(swap_codeword(table.codewords[idx], swap_pos))
        trace.append(StepRecord(jumped, state, idx, swap_pos))
        carried = rm.transitions[state][idx].to
        pos += length
        first = False
    return "".join(out), tuple(trace)


def decrypt(cipher: str, codec: HfsacCodec, ks: KeySchedule, n_bits: int) -> str:
    """Invert encrypt under the same schedule; truncates to n_bits."""
    rm = codec.rm
    gen_jump = ks.substream(TAG_JUMP)
    gen_state = ks.substream(TAG_STATE)
    gen_swap = ks.substream(TAG_SWAP)
    out: list[str] = []
    out_len = 0
    pos = 0
    carried = 0
    first = True
    while out_len < n_bits:
        jumped = draw_bernoulli(gen_jump, ks.jump_q_num) or first
        state = draw_uniform(gen_state, rm.state_count) if jumped else carried
        table = codec.tables[state]
        swap_pos = draw_uniform(gen_swap, table.max_len + 1)
        hit = codec.match_output(state, cipher, pos, swap_pos)
        if hit is None:
            if pos + table.max_len > len(cipher):
                raise TruncatedStreamError("truncated stream")
            raise WrongKeyError("wrong key or corrupt stream")
        idx, length = hit
        t = rm.transitions[state][idx]
        out.append(t.input_block)
        out_len += len(t.input_block)
        pos += length
        carried = t.to
        first = False
    return "".join(out)[:n_bits]


def keyspace_bits(
    n: int, state_count: int, forced_first: bool = False, mode: str = "exact"
) -> float:
    """log2 of the jump-key count for an n-bit plaintext over S states.

    Exact mode counts half-weight jump patterns via log-gamma; asymptotic
    mode applies the Stirling closed form (coefficient 0.8, or 0.4 when the
    first jump is forced).
    """
    if state_count < 1:
        raise ValueError("state_count must be >= 1")
    if mode == "exact":
        if n < 2 or n % 2:
            raise ValueError("exact mode needs even n >= 2")
        if forced_first:
            a, b = n - 1, n // 2 - 1
        else:
            a, b = n, n // 2
        log_comb = lgamma(a + 1) - lgamma(b + 1) - lgamma(a - b + 1)
        return exp(log_comb) * log2(state_count)
    if mode == "asymptotic":
        if n < 1:
            raise ValueError("n must be >= 1")
        coeff = 0.4 if forced_first else 0.8
        return coeff * (2**n / sqrt(n)) * log2(state_count)
    raise ValueError(f"unknown mode {mode!r}")
