"""Mute-transition elimination.

Forward composition replaces each transition without output by the
transitions of its successor (input blocks concatenate, outputs are
adopted), until every edge emits.  The result is a machine whose per-state
input blocks form a complete prefix-free set, so any bit stream parses
unambiguously.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coder import CoderParams, FullMachine


class NonEmittingCycleError(RuntimeError):
    """Composition depth blew past its bound; the source machine is broken."""


@dataclass(frozen=True)
class ReducedTransition:
    from_state: int
    input_block: str
    output_bits: str
    to: int


class ReducedMachine:
    """Block-input machine; immutable after construction.

    transitions[s] is the tuple of rows leaving state s, in parse-tree
    order; origin[s] is the (low, high, follow) triple the state came from.
    """

    __slots__ = ("params", "state_count", "transitions", "origin", "_match_tables")

    def __init__(self, params: CoderParams, transitions, origin):
        self.params = params
        self.transitions: tuple[tuple[ReducedTransition, ...], ...] = tuple(
            tuple(row) for row in transitions
        )
        self.state_count = len(self.transitions)
        self.origin: tuple[tuple[int, int, int], ...] = tuple(origin)
        self._match_tables = tuple(_length_groups(row) for row in self.transitions)

    def match(self, state: int, bits: str, pos: int) -> tuple[int, int]:
        """Match the unique input block of `state` prefixing bits[pos:].

        Returns (transition index, block length).  The tail of `bits` is
        implicitly zero-padded, so a match always exists.
        """
        for length, table in self._match_tables[state]:
            chunk = bits[pos : pos + length]
            if len(chunk) < length:
                chunk = chunk + "0" * (length - len(chunk))
            idx = table.get(chunk)
            if idx is not None:
                return idx, length
        raise AssertionError(f"incomplete input block set in state {state}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ReducedMachine)
            and self.params == other.params
            and self.transitions == other.transitions
            and self.origin == other.origin
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        n_rows = sum(len(row) for row in self.transitions)
        return (
            f"ReducedMachine(params={self.params!r}, "
            f"states={self.state_count}, transitions={n_rows})"
        )


def _length_groups(row):
    by_len: dict[int, dict[str, int]] = {}
    for i, t in enumerate(row):
        by_len.setdefault(len(t.input_block), {})[t.input_block] = i
    return tuple(sorted(by_len.items()))


def _expand_state(machine: FullMachine, state: int):
    """Rows (block, output, to) for `state` after composing away mute edges.

    Mute chains are loop-free on valid machines (follow never decreases
    without an emission, and at fixed follow the intervals strictly nest),
    so a repeated state along one chain is reported as a coder bug.  Done
    iteratively: chains can run to ~2**n_bits on skewed splits.
    """
    rows: list[tuple[str, str, int]] = []
    # stack of (transition, input block so far, states already on this chain)
    t0, t1 = machine.outgoing(state)
    stack = [(t1, "", (state,)), (t0, "", (state,))]
    while stack:
        t, block, path = stack.pop()
        block = block + ("1" if t.symbol else "0")
        if t.emitted:
            rows.append((block, t.emitted, t.to))
            continue
        if t.to in path:
            raise NonEmittingCycleError("non-emitting cycle")
        path = path + (t.to,)
        n0, n1 = machine.outgoing(t.to)
        stack.append((n1, block, path))
        stack.append((n0, block, path))
    return rows


def reduce_machine(machine: FullMachine) -> ReducedMachine:
    """Eliminate mute transitions, drop unreachable states, renumber by BFS."""
    params = machine.params
    new_index = {0: 0}
    order = [0]
    expanded = []
    qi = 0
    while qi < len(order):
        rows = _expand_state(machine, order[qi])
        for _block, _out, to in rows:
            if to not in new_index:
                new_index[to] = len(order)
                order.append(to)
        expanded.append(rows)
        qi += 1
    transitions = []
    origin = []
    for new_s, old_s in enumerate(order):
        st = machine.states[old_s]
        origin.append((st.low, st.high, st.follow))
        transitions.append(
            tuple(
                ReducedTransition(new_s, block, out, new_index[to])
                for block, out, to in expanded[new_s]
            )
        )
    return ReducedMachine(params, transitions, origin)


@dataclass(frozen=True)
class StateCheck:
    state: int
    prefix_free: bool
    kraft_sum: Fraction
    reachable: bool
    n_transitions: int

    @property
    def complete(self) -> bool:
        return self.kraft_sum == 1

    @property
    def ok(self) -> bool:
        return (
            self.prefix_free
            and self.complete
            and self.reachable
            and self.n_transitions >= 2
        )


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[StateCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[StateCheck]:
        return [c for c in self.checks if not c.ok]


def _is_prefix_free(blocks) -> bool:
    blocks = sorted(blocks)
    return not any(
        blocks[i + 1].startswith(blocks[i]) for i in range(len(blocks) - 1)
    )


def validate_reduced(rm: ReducedMachine) -> ValidationReport:
    """Per-state structural checks: prefix-freeness, Kraft equality, reachability."""
    reached = {0}
    frontier = [0]
    while frontier:
        s = frontier.pop()
        for t in rm.transitions[s]:
            if t.to not in reached:
                reached.add(t.to)
                frontier.append(t.to)
    checks = []
    for s, row in enumerate(rm.transitions):
        blocks = [t.input_block for t in row]
        kraft = sum((Fraction(1, 1 << len(b)) for b in blocks), Fraction(0))
        checks.append(
            StateCheck(
                state=s,
                prefix_free=_is_prefix_free(blocks),
                kraft_sum=kraft,
                reachable=s in reached,
                n_transitions=len(row),
            )
        )
    return ValidationReport(tuple(checks))


def fsac_parse(bits: str, rm: ReducedMachine):
    """Greedy block parse from state 0.

    Returns ([(state, transition index), ...], padded input); the input is
    zero-padded at the tail to complete the final block.
    """
    steps: list[tuple[int, int]] = []
    pos = 0
    state = 0
    n = len(bits)
    while pos < n:
        idx, length = rm.match(state, bits, pos)
        steps.append((state, idx))
        state = rm.transitions[state][idx].to
        pos += length
    padded = bits + "0" * (pos - n) if pos > n else bits
    return steps, padded


def fsac_encode(bits: str, rm: ReducedMachine) -> str:
    """Table-driven encode: concatenated arithmetic outputs along the parse."""
    steps, _ = fsac_parse(bits, rm)
    return "".join(rm.transitions[s][i].output_bits for s, i in steps)
