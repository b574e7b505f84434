"""Per-state prefix codes replacing the arithmetic outputs.

Each state is treated as a standalone source whose symbol weights are
2**(-output length), normalized.  A canonical Huffman code over those
weights gives every transition a self-contained codeword, which keeps the
stream parseable across keyed state jumps.  The swap transform complements
every codeword bit from a chosen position on; it permutes the code tree, so
prefix-freeness survives.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .reducer import ReducedMachine

_FLIP = str.maketrans("01", "10")


class CorruptStreamError(ValueError):
    """Keyless decode hit bits that match no codeword."""


def heuristic_weights(rm: ReducedMachine, state: int) -> list[Fraction]:
    """Normalized 2**(-output length) weights, in transition order."""
    raw = [Fraction(1, 1 << len(t.output_bits)) for t in rm.transitions[state]]
    total = sum(raw)
    return [w / total for w in raw]


def huffman_code_lengths(weights) -> list[int]:
    """Optimal prefix-code lengths by pairwise merging of smallest weights.

    Deterministic tie-break: equal weights prefer leaves over merged nodes,
    then the node holding the smallest transition index.
    """
    k = len(weights)
    if k < 2:
        raise ValueError("need at least 2 weights")
    lengths = [0] * k
    heap = [(w, 0, i, [i]) for i, w in enumerate(weights)]
    heapq.heapify(heap)
    while len(heap) > 1:
        wa, _, ia, xa = heapq.heappop(heap)
        wb, _, ib, xb = heapq.heappop(heap)
        for i in xa:
            lengths[i] += 1
        for i in xb:
            lengths[i] += 1
        heapq.heappush(heap, (wa + wb, 1, min(ia, ib), xa + xb))
    return lengths


def canonical_codewords(lengths) -> list[str]:
    """Canonical assignment: sort by (length, index), count upward."""
    order = sorted(range(len(lengths)), key=lambda i: (lengths[i], i))
    codes = [""] * len(lengths)
    code = 0
    prev = lengths[order[0]]
    for pos, i in enumerate(order):
        if pos:
            code = (code + 1) << (lengths[i] - prev)
        codes[i] = format(code, f"0{lengths[i]}b")
        prev = lengths[i]
    return codes


def build_state_code(weights) -> list[str]:
    """Canonical Huffman codewords for one state's weights."""
    return canonical_codewords(huffman_code_lengths(weights))


@dataclass(frozen=True)
class StateCodeTable:
    """Codewords for one state, aligned with its transition order."""

    state: int
    codewords: tuple[str, ...]
    max_len: int


class HfsacCodec:
    """Reduced machine plus one code table per state; immutable."""

    __slots__ = ("rm", "tables", "_decode_tables")

    def __init__(self, rm: ReducedMachine, tables):
        self.rm = rm
        self.tables: tuple[StateCodeTable, ...] = tuple(tables)
        self._decode_tables = tuple(
            _length_groups(t.codewords) for t in self.tables
        )

    def match_output(self, state: int, code: str, pos: int, swap_pos: int | None = None):
        """Match the unique (optionally swapped) codeword of `state` at code[pos:].

        Returns (transition index, codeword length) or None when nothing
        matches within the available bits.
        """
        for length, table in self._decode_tables[state]:
            if pos + length > len(code):
                return None
            chunk = code[pos : pos + length]
            if swap_pos is not None:
                chunk = swap_codeword(chunk, swap_pos)
            idx = table.get(chunk)
            if idx is not None:
                return idx, length
        return None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HfsacCodec)
            and self.rm == other.rm
            and self.tables == other.tables
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"HfsacCodec(states={self.rm.state_count})"


def _length_groups(codewords):
    by_len: dict[int, dict[str, int]] = {}
    for i, cw in enumerate(codewords):
        by_len.setdefault(len(cw), {})[cw] = i
    return tuple(sorted(by_len.items()))


def attach_tables(rm: ReducedMachine) -> HfsacCodec:
    """Build the per-state code tables for a reduced machine."""
    tables = []
    for s in range(rm.state_count):
        codes = build_state_code(heuristic_weights(rm, s))
        tables.append(StateCodeTable(s, tuple(codes), max(map(len, codes))))
    return HfsacCodec(rm, tables)


def swap_codeword(code: str, pos: int) -> str:
    """Complement every bit at index >= pos; pos past the end is the identity."""
    if pos < 0:
        raise ValueError(f"swap position must be >= 0, got {pos}")
    if pos >= len(code):
        return code
    return code[:pos] + code[pos:].translate(_FLIP)


def hfac_encode(bits: str, codec: HfsacCodec) -> str:
    """Keyless encode: concatenated codewords along the block parse."""
    from .reducer import fsac_parse

    steps, _ = fsac_parse(bits, codec.rm)
    return "".join(codec.tables[s].codewords[i] for s, i in steps)


def hfac_decode(code: str, codec: HfsacCodec, n_bits: int) -> str:
    """Keyless decode of hfac_encode output, truncated to n_bits."""
    rm = codec.rm
    out: list[str] = []
    out_len = 0
    pos = 0
    state = 0
    while out_len < n_bits:
        hit = codec.match_output(state, code, pos)
        if hit is None:
            raise CorruptStreamError("corrupt HFAC stream")
        idx, length = hit
        t = rm.transitions[state][idx]
        out.append(t.input_block)
        out_len += len(t.input_block)
        pos += length
        state = t.to
    return "".join(out)[:n_bits]
