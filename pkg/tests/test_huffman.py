from fractions import Fraction

import pytest

from hfsac import (
    CoderParams,
    CorruptStreamError,
    ReducedMachine,
    ReducedTransition,
    build_state_code,
    fsac_parse,
    heuristic_weights,
    hfac_decode,
    hfac_encode,
    swap_codeword,
)
from hfsac.huffman import canonical_codewords, huffman_code_lengths
from conftest import SWEEP, is_prefix_free, kraft, optimal_expected_length, rand_bits


def one_state_machine(outputs):
    """Single-state machine with the given per-transition outputs."""
    blocks = {
        2: ["0", "1"],
        3: ["0", "10", "11"],
        4: ["00", "01", "10", "11"],
    }[len(outputs)]
    rows = [
        tuple(
            ReducedTransition(0, b, o, 0) for b, o in zip(blocks, outputs)
        )
    ]
    return ReducedMachine(CoderParams(3, 3, 1), rows, [(0, 8, 0)])


class TestHeuristicWeights:
    def test_output_lengths_become_weights(self):
        rm = one_state_machine(["1", "011", "0"])
        assert heuristic_weights(rm, 0) == [
            Fraction(4, 9), Fraction(1, 9), Fraction(4, 9),
        ]

    def test_two_symbols(self):
        rm = one_state_machine(["0", "1"])
        assert heuristic_weights(rm, 0) == [Fraction(1, 2), Fraction(1, 2)]

    def test_equal_lengths_normalize_uniform(self):
        rm = one_state_machine(["00", "01", "10", "11"])
        assert heuristic_weights(rm, 0) == [Fraction(1, 4)] * 4


class TestBuildStateCode:
    def test_skewed_triple(self):
        codes = build_state_code([Fraction(4, 9), Fraction(1, 9), Fraction(4, 9)])
        assert sorted(len(c) for c in codes) == [1, 2, 2]
        # expected length matches the brute-force optimum (14/9)
        weights = [Fraction(4, 9), Fraction(1, 9), Fraction(4, 9)]
        got = sum(w * len(c) for w, c in zip(weights, codes))
        assert got == optimal_expected_length(weights) == Fraction(14, 9)

    def test_two_weights(self):
        assert build_state_code([Fraction(1, 2), Fraction(1, 2)]) == ["0", "1"]

    def test_rejects_single_weight(self):
        with pytest.raises(ValueError):
            build_state_code([Fraction(1)])

    def test_deterministic_under_ties(self):
        weights = [Fraction(1, 4)] * 4
        assert build_state_code(weights) == ["00", "01", "10", "11"]
        assert huffman_code_lengths(weights) == [2, 2, 2, 2]

    def test_canonical_assignment_orders_by_length_then_index(self):
        assert canonical_codewords([2, 1, 2]) == ["10", "0", "11"]

    @pytest.mark.parametrize("k", range(2, 9))
    def test_optimality_random_weights(self, k):
        from hfsac import SplitMix64

        gen = SplitMix64(k)
        for _ in range(12):
            weights = [Fraction(1 + gen.next_u64() % 64, 1) for _ in range(k)]
            total = sum(weights)
            weights = [w / total for w in weights]
            codes = build_state_code(weights)
            assert is_prefix_free(codes)
            assert kraft(codes) == 1
            got = sum(w * len(c) for w, c in zip(weights, codes))
            assert got == optimal_expected_length(weights)


class TestAttachTables:
    def test_single_state_machine_gets_one_bit_code(self, cache):
        codec = cache.codec(8, 128, 3)
        assert codec.tables[0].codewords == ("0", "1")
        assert codec.tables[0].max_len == 1

    @pytest.mark.parametrize("n,p0,fm", SWEEP[::3])
    def test_tables_prefix_free_and_complete(self, cache, n, p0, fm):
        codec = cache.codec(n, p0, fm)
        assert len(codec.tables) == codec.rm.state_count
        for table, row in zip(codec.tables, codec.rm.transitions):
            assert len(table.codewords) == len(row)
            assert is_prefix_free(table.codewords)
            assert kraft(table.codewords) == 1
            assert table.max_len == max(len(c) for c in table.codewords)

    def test_reference_table_shape(self, cache):
        codec = cache.codec(4, 3, 1)
        assert [t.max_len for t in codec.tables] == [3, 5, 3, 3]

    @pytest.mark.parametrize("n,p0,fm", [(4, 3, 1), (5, 6, 1), (6, 13, 3)])
    def test_expected_length_optimal_per_state(self, cache, n, p0, fm):
        from hfsac import heuristic_weights as hw

        codec = cache.codec(n, p0, fm)
        for s, table in enumerate(codec.tables):
            weights = hw(codec.rm, s)
            if len(weights) > 8:
                continue
            got = sum(w * len(c) for w, c in zip(weights, table.codewords))
            assert got == optimal_expected_length(tuple(weights))


class TestSwapCodeword:
    def test_reference_swaps(self):
        assert swap_codeword("0010", 1) == "0101"
        assert swap_codeword("1", 1) == "1"
        assert swap_codeword("000", 0) == "111"

    def test_position_past_end_is_identity(self):
        assert swap_codeword("101", 7) == "101"

    def test_negative_position_rejected(self):
        with pytest.raises(ValueError):
            swap_codeword("101", -1)

    @pytest.mark.parametrize("pos", range(6))
    def test_involution(self, pos):
        for code in ("0", "1", "0010", "11011", "00000"):
            assert swap_codeword(swap_codeword(code, pos), pos) == code

    @pytest.mark.parametrize("n,p0,fm", [(4, 3, 1), (6, 28, 3), (8, 51, 1)])
    def test_swap_preserves_prefix_freeness(self, cache, n, p0, fm):
        codec = cache.codec(n, p0, fm)
        for table in codec.tables:
            for pos in range(table.max_len + 1):
                swapped = [swap_codeword(c, pos) for c in table.codewords]
                assert is_prefix_free(swapped)
                assert kraft(swapped) == 1


class TestHfacCodec:
    def test_encode_reference_block(self, cache):
        codec = cache.codec(4, 3, 1)
        assert hfac_encode("0", codec) == codec.tables[0].codewords[0]
        assert hfac_encode("0", codec) == "110"

    def test_all_zeros_alternates_two_states(self, cache):
        codec = cache.codec(4, 3, 1)
        steps, _ = fsac_parse("0" * 64, codec.rm)
        states = [s for s, _ in steps]
        assert states == [0, 1] * 32
        out = hfac_encode("0" * 8, codec)
        assert out == "110100" * 4

    def test_decode_reference_block(self, cache):
        codec = cache.codec(4, 3, 1)
        assert hfac_decode("110", codec, 1) == "0"

    def test_roundtrip_exhaustive_to_length_12(self, cache):
        codec = cache.codec(4, 3, 1)
        for length in range(13):
            for v in range(1 << length):
                bits = format(v, f"0{length}b") if length else ""
                assert hfac_decode(hfac_encode(bits, codec), codec, length) == bits

    @pytest.mark.parametrize("n,p0,fm", SWEEP[::5])
    def test_roundtrip_randomized(self, cache, n, p0, fm):
        codec = cache.codec(n, p0, fm)
        for i in range(20):
            bits = rand_bits(77_000 + 97 * n + i, 700, 0.4)
            assert hfac_decode(hfac_encode(bits, codec), codec, len(bits)) == bits

    def test_corrupt_stream_detected(self, cache):
        codec = cache.codec(4, 3, 1)
        code = hfac_encode("0110", codec)
        with pytest.raises(CorruptStreamError):
            hfac_decode(code[:-1], codec, 4)

    def test_rate_ordering_on_iid_data(self, cache):
        from hfsac import ac_encode_parts, fsac_encode

        codec = cache.codec(8, 51, 1)
        bits = rand_bits(31337, 50_000, 0.2)
        n = len(bits)
        ac_rate = 100 * (1 - len(ac_encode_parts(bits, codec.rm.params)[0]) / n)
        fsac_rate = 100 * (1 - len(fsac_encode(bits, codec.rm)) / n)
        hfac_rate = 100 * (1 - len(hfac_encode(bits, codec)) / n)
        assert abs(ac_rate - fsac_rate) < 0.2
        assert fsac_rate >= hfac_rate - 0.5
        assert fsac_rate - hfac_rate <= 10.0
