"""Integer arithmetic coding on [0, 2**N) and its full finite-state machine.

The coder keeps an integer interval [low, high) plus a follow counter for
deferred middle expansions.  Enumerating every canonical interval reachable
from (0, 2**N, 0) yields a finite state machine whose edges carry the bits
emitted during renormalization; the same interval rules drive the streaming
encoder/decoder used as a compression baseline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

DEFAULT_STATE_CEILING = 10**6


class StateExplosionError(RuntimeError):
    """State-machine exploration exceeded the configured ceiling."""


class TruncatedCodeError(ValueError):
    """Arithmetic code ran out before all symbols were recovered."""


@dataclass(frozen=True)
class CoderParams:
    """Static coder configuration.

    The model probability of symbol 0 is p0_num / 2**n_bits.  jump_q_num / 256
    is the jump probability consumed by the encryption layer; it does not
    affect the coder tables themselves.
    """

    n_bits: int
    p0_num: int
    f_max: int
    jump_q_num: int = 0

    def __post_init__(self) -> None:
        if not 3 <= self.n_bits <= 16:
            raise ValueError(f"n_bits must be in 3..16, got {self.n_bits}")
        top = (1 << self.n_bits) - 1
        if not 1 <= self.p0_num <= top:
            raise ValueError(f"p0_num must be in 1..{top}, got {self.p0_num}")
        if not 0 <= self.f_max <= 15:
            raise ValueError(f"f_max must be in 0..15, got {self.f_max}")
        if not 0 <= self.jump_q_num <= 256:
            raise ValueError(f"jump_q_num must be in 0..256, got {self.jump_q_num}")

    @property
    def full(self) -> int:
        return 1 << self.n_bits

    @property
    def half(self) -> int:
        return 1 << (self.n_bits - 1)

    @property
    def quarter(self) -> int:
        return 1 << (self.n_bits - 2)

    @classmethod
    def from_probability(
        cls, n_bits: int, p_zero: float, f_max: int, jump_q_num: int = 0
    ) -> "CoderParams":
        """Quantize a real probability of symbol 0 to the nearest numerator."""
        scale = 1 << n_bits
        num = min(max(round(p_zero * scale), 1), scale - 1)
        return cls(n_bits, num, f_max, jump_q_num)


@dataclass(frozen=True)
class FullState:
    """Canonical coder state: interval bounds plus pending follow count."""

    low: int
    high: int
    follow: int


@dataclass(frozen=True)
class FullTransition:
    from_state: int
    symbol: int
    emitted: str
    to: int

    @property
    def mute(self) -> bool:
        return self.emitted == ""


@dataclass(frozen=True)
class FullMachine:
    """Complete state graph of the coder; two transitions per state.

    Transitions are stored flat in state order: the pair for state s sits at
    indices 2*s (symbol 0) and 2*s + 1 (symbol 1).
    """

    params: CoderParams
    states: tuple[FullState, ...]
    transitions: tuple[FullTransition, ...]

    def outgoing(self, state: int) -> tuple[FullTransition, FullTransition]:
        return self.transitions[2 * state], self.transitions[2 * state + 1]

    @property
    def mute_count(self) -> int:
        return sum(1 for t in self.transitions if t.mute)


def split_interval(low: int, high: int, params: CoderParams) -> int:
    """Split point of [low, high): symbol 0 owns [low, s), symbol 1 owns [s, high)."""
    if high - low < 2:
        raise ValueError(f"interval too narrow to split: [{low}, {high})")
    s = low + (((high - low) * params.p0_num) >> params.n_bits)
    return min(max(s, low + 1), high - 1)


def _renormalize(low: int, high: int, follow: int, params: CoderParams):
    half = params.half
    quarter = params.quarter
    three_quarter = half + quarter
    f_max = params.f_max
    out: list[str] = []
    while True:
        if high <= half:
            out.append("0" + "1" * follow)
            follow = 0
            low, high = low * 2, high * 2
        elif low >= half:
            out.append("1" + "0" * follow)
            follow = 0
            low, high = (low - half) * 2, (high - half) * 2
        elif low >= quarter and high <= three_quarter and follow < f_max:
            # middle straddle: defer one bit; disabled once follow saturates
            follow += 1
            low, high = (low - quarter) * 2, (high - quarter) * 2
        else:
            break
    return low, high, follow, "".join(out)


def renormalize(state: FullState, params: CoderParams) -> tuple[FullState, str]:
    """Expand the interval until no doubling rule fires; returns emitted bits."""
    low, high, follow, emitted = _renormalize(
        state.low, state.high, state.follow, params
    )
    return FullState(low, high, follow), emitted


def build_full_fsm(
    params: CoderParams, state_ceiling: int = DEFAULT_STATE_CEILING
) -> FullMachine:
    """Breadth-first exploration of every canonical state from (0, 2**N, 0)."""
    init = (0, params.full, 0)
    index: dict[tuple[int, int, int], int] = {init: 0}
    states = [init]
    transitions: list[FullTransition] = []
    queue = deque([0])
    while queue:
        si = queue.popleft()
        low, high, follow = states[si]
        s = split_interval(low, high, params)
        for symbol, (nl, nh) in enumerate(((low, s), (s, high))):
            rl, rh, rf, emitted = _renormalize(nl, nh, follow, params)
            key = (rl, rh, rf)
            to = index.get(key)
            if to is None:
                if len(states) >= state_ceiling:
                    raise StateExplosionError(f"state explosion for {params}")
                to = len(states)
                index[key] = to
                states.append(key)
                queue.append(to)
            transitions.append(FullTransition(si, symbol, emitted, to))
    return FullMachine(
        params, tuple(FullState(*s) for s in states), tuple(transitions)
    )


def ac_encode_parts(bits: str, params: CoderParams) -> tuple[str, str]:
    """Streaming encode split into (body, flush suffix)."""
    low, high, follow = 0, params.full, 0
    out: list[str] = []
    for b in bits:
        s = split_interval(low, high, params)
        if b == "0":
            high = s
        elif b == "1":
            low = s
        else:
            raise ValueError(f"invalid bit {b!r}")
        low, high, follow, emitted = _renormalize(low, high, follow, params)
        out.append(emitted)
    follow += 1
    if low >= params.quarter:
        flush = "1" + "0" * follow
    else:
        flush = "0" + "1" * follow
    return "".join(out), flush


def ac_encode_stream(bits: str, params: CoderParams) -> str:
    """Encode a bit string; the output ends with a flush that pins the interval."""
    body, flush = ac_encode_parts(bits, params)
    return body + flush


def ac_decode_stream(code: str, n_symbols: int, params: CoderParams) -> str:
    """Recover n_symbols bits from an ac_encode_stream output.

    Up to n_bits trailing zero bits are supplied past the end of the code
    (a valid stream never needs more); requiring more raises
    TruncatedCodeError.
    """
    if n_symbols == 0:
        return ""
    n = params.n_bits
    half = params.half
    quarter = params.quarter
    three_quarter = half + quarter
    f_max = params.f_max
    pos = 0
    padded = 0

    def next_bit() -> int:
        nonlocal pos, padded
        if pos < len(code):
            c = code[pos]
            pos += 1
            if c == "0":
                return 0
            if c == "1":
                return 1
            raise ValueError(f"invalid bit {c!r}")
        padded += 1
        if padded > n:
            raise TruncatedCodeError("truncated code")
        return 0

    window = 0
    for _ in range(n):
        window = window * 2 + next_bit()
    low, high, follow = 0, params.full, 0
    out: list[str] = []
    for i in range(n_symbols):
        s = split_interval(low, high, params)
        if window < s:
            out.append("0")
            high = s
        else:
            out.append("1")
            low = s
        if i == n_symbols - 1:
            break
        while True:
            if high <= half:
                follow = 0
                low, high = low * 2, high * 2
                window = window * 2 + next_bit()
            elif low >= half:
                follow = 0
                low, high = (low - half) * 2, (high - half) * 2
                window = (window - half) * 2 + next_bit()
            elif low >= quarter and high <= three_quarter and follow < f_max:
                follow += 1
                low, high = (low - quarter) * 2, (high - quarter) * 2
                window = (window - quarter) * 2 + next_bit()
            else:
                break
    return "".join(out)
