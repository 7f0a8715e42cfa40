"""Bit-exact message packing.

Elements are packed little-endian, LSB-first within each element, in
row-major order; each message component is padded to a byte boundary
independently.  These rules fix the wire format completely, so the byte
counts agree with the closed-form bandwidth formulas.
"""

from __future__ import annotations

import numpy as np

__all__ = ["pack", "unpack", "pack_bits", "unpack_bits"]


def pack(values: np.ndarray, bits: int) -> bytes:
    """Pack non-negative ints < 2^bits into ceil(len*bits/8) bytes."""
    flat = np.asarray(values, dtype=np.int64).reshape(-1)
    if bits < 1:
        raise ValueError("bits >= 1")
    if flat.size and (flat.min() < 0 or flat.max() >> bits):
        raise ValueError(f"values out of range for {bits} bits")
    bitmat = (flat[:, None] >> np.arange(bits)) & 1
    return np.packbits(bitmat.astype(np.uint8).ravel(), bitorder="little").tobytes()


def unpack(data: bytes, bits: int, count: int) -> np.ndarray:
    """Inverse of pack; checks the exact byte length."""
    need = (count * bits + 7) // 8
    if len(data) != need:
        raise ValueError(f"expected {need} bytes, got {len(data)}")
    raw = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    bitmat = raw[: count * bits].reshape(count, bits).astype(np.int64)
    return bitmat @ (1 << np.arange(bits, dtype=np.int64))


def pack_bits(bits_arr: np.ndarray) -> bytes:
    return pack(np.asarray(bits_arr, dtype=np.int64), 1)


def unpack_bits(data: bytes, count: int) -> np.ndarray:
    return unpack(data, 1, count)
