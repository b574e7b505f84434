"""Bit-string <-> byte packing, most significant bit first."""

from __future__ import annotations


def pack_bits(bits: str) -> bytes:
    """Pack '0'/'1' characters into bytes, zero-padding the last byte."""
    if not bits:
        return b""
    n = len(bits)
    n_bytes = (n + 7) // 8
    value = int(bits, 2) << (8 * n_bytes - n)
    return value.to_bytes(n_bytes, "big")


def unpack_bits(data: bytes, n_bits: int | None = None) -> str:
    """Unpack bytes to a bit string; n_bits trims trailing pad bits."""
    if not data:
        return ""
    bits = format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")
    return bits if n_bits is None else bits[:n_bits]
