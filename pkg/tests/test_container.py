import pytest

from hfsac import (
    CipherContainer,
    CoderParams,
    ContainerError,
    pack_bits,
    parse,
    serialize,
    unpack_bits,
)
from conftest import rand_bits


class TestBitPacking:
    def test_empty(self):
        assert pack_bits("") == b""
        assert unpack_bits(b"") == ""

    def test_msb_first(self):
        assert pack_bits("10000000") == b"\x80"
        assert pack_bits("1") == b"\x80"
        assert pack_bits("00000001") == b"\x01"
        assert unpack_bits(b"\x80") == "10000000"

    def test_pad_and_trim(self):
        assert pack_bits("101") == bytes([0b10100000])
        assert unpack_bits(pack_bits("101"), 3) == "101"

    @pytest.mark.parametrize("n", [1, 7, 8, 9, 63, 64, 65, 1000])
    def test_roundtrip(self, n):
        bits = rand_bits(n, n)
        assert unpack_bits(pack_bits(bits), n) == bits


class TestContainer:
    def roundtrip(self, container):
        return parse(serialize(container))

    def test_roundtrip_simple(self):
        c = CipherContainer(CoderParams(7, 44, 10, 230), 524288, rand_bits(1, 777))
        assert self.roundtrip(c) == c

    def test_roundtrip_empty_payload(self):
        c = CipherContainer(CoderParams(4, 3, 1, 0), 0, "")
        assert self.roundtrip(c) == c

    @pytest.mark.parametrize("n_cipher", [1, 7, 8, 9, 15, 16, 17])
    def test_roundtrip_pad_edges(self, n_cipher):
        c = CipherContainer(CoderParams(5, 6, 1, 128), 12, rand_bits(n_cipher, n_cipher))
        assert self.roundtrip(c) == c

    def test_header_reconstructs_params(self):
        c = CipherContainer(CoderParams(8, 51, 3, 256), 99, "101")
        assert self.roundtrip(c).params == CoderParams(8, 51, 3, 256)

    def test_bad_magic(self):
        blob = serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010"))
        with pytest.raises(ContainerError, match="magic"):
            parse(b"XXXX" + blob[4:])

    def test_bad_version(self):
        blob = bytearray(serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010")))
        blob[4] = 9
        with pytest.raises(ContainerError, match="version"):
            parse(bytes(blob))

    def test_truncated_header(self):
        blob = serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010"))
        with pytest.raises(ContainerError, match="truncated"):
            parse(blob[:10])

    def test_truncated_payload(self):
        blob = serialize(CipherContainer(CoderParams(4, 3, 1), 64, rand_bits(2, 64)))
        with pytest.raises(ContainerError, match="truncated"):
            parse(blob[:-1])

    def test_trailing_garbage(self):
        blob = serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010"))
        with pytest.raises(ContainerError, match="trailing"):
            parse(blob + b"\x00")

    def test_nonzero_padding(self):
        blob = bytearray(serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010")))
        blob[-1] |= 0x01  # set a pad bit
        with pytest.raises(ContainerError, match="padding"):
            parse(bytes(blob))

    def test_invalid_header_params(self):
        blob = bytearray(serialize(CipherContainer(CoderParams(4, 3, 1), 4, "1010")))
        blob[5] = 2  # n_bits below the supported floor
        with pytest.raises(ContainerError, match="parameters"):
            parse(bytes(blob))
