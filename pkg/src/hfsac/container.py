"""Self-describing cipher container.

Layout (big endian): magic "HFSA", version byte 0x01, n_bits u8, f_max u8,
p0_num u32, jump_q_num u16, plain_bit_len u64, cipher_bit_len u64, then the
cipher bits packed MSB-first with zero padding.  Everything but the seed is
public; the header alone reconstructs the codec.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .bitio import pack_bits, unpack_bits
from .coder import CoderParams

MAGIC = b"HFSA"
VERSION = 1

_HEADER = struct.Struct(">4sBBBIHQQ")


class ContainerError(ValueError):
    """Malformed container bytes."""


@dataclass(frozen=True)
class CipherContainer:
    params: CoderParams
    plain_bit_len: int
    cipher_bits: str

    def __post_init__(self) -> None:
        if self.plain_bit_len < 0:
            raise ValueError("negative plain_bit_len")


def serialize(container: CipherContainer) -> bytes:
    p = container.params
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        p.n_bits,
        p.f_max,
        p.p0_num,
        p.jump_q_num,
        container.plain_bit_len,
        len(container.cipher_bits),
    )
    return header + pack_bits(container.cipher_bits)


def parse(data: bytes) -> CipherContainer:
    if len(data) < _HEADER.size:
        raise ContainerError("truncated container header")
    magic, version, n_bits, f_max, p0_num, jump_q, plain_len, cipher_len = (
        _HEADER.unpack_from(data)
    )
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    try:
        params = CoderParams(n_bits, p0_num, f_max, jump_q)
    except ValueError as exc:
        raise ContainerError(f"invalid header parameters: {exc}") from None
    payload = data[_HEADER.size :]
    need = (cipher_len + 7) // 8
    if len(payload) < need:
        raise ContainerError("truncated container payload")
    if len(payload) > need:
        raise ContainerError("trailing bytes after container payload")
    bits = unpack_bits(payload)
    if any(b == "1" for b in bits[cipher_len:]):
        raise ContainerError("nonzero padding bits")
    return CipherContainer(params, plain_len, bits[:cipher_len])
