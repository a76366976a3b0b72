"""Bit-level views of IEEE-754 binary64 values.

Every value is reinterpreted through a single 64-bit unsigned integer and
split with shifts and masks, so nothing here depends on how the platform
orders 32-bit halves in memory.

Comparisons between floats in this package are always made on bit patterns
(see :func:`same_bits`); numeric ``==`` conflates ``0.0``/``-0.0`` and never
matches a NaN.
"""

from __future__ import annotations

import struct

import numpy as np

_F64 = struct.Struct("=d")
_U64 = struct.Struct("=Q")

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF
SIGN_BIT = 1 << 63
SIGN_BIT32 = 1 << 31

EXPONENT_BITS = 11
HIGH_MANTISSA_BITS = 20
EXPONENT_SHIFT32 = HIGH_MANTISSA_BITS  # exponent field position inside a compact word

# Missing-value marker: exponent all ones, upper 20 mantissa bits all ones,
# lower 32 bits hold 1954. Sign bit clear.
NA_BITS = (0x7FF << 52) | (0xFFFFF << 32) | 1954


def to_bits(v: float) -> int:
    """Return the 64-bit pattern of ``v`` as an unsigned int."""
    return _U64.unpack(_F64.pack(v))[0]


def from_bits(bits: int) -> float:
    return _F64.unpack(_U64.pack(bits & MASK64))[0]


NA = from_bits(NA_BITS)


def upper32(v: float) -> int:
    """Sign, exponent and the high 20 mantissa bits of ``v``."""
    return to_bits(v) >> 32


def lower32(v: float) -> int:
    return to_bits(v) & MASK32


def recompose(hi: int, lo: int) -> float:
    """Inverse of ``(upper32, lower32)``; total over all 32-bit inputs."""
    return from_bits(((hi & MASK32) << 32) | (lo & MASK32))


def same_bits(a: float, b: float) -> bool:
    return to_bits(a) == to_bits(b)


def is_na(v: float) -> bool:
    return to_bits(v) == NA_BITS


def is_nan_bits(bits: int) -> bool:
    return (bits >> 52) & 0x7FF == 0x7FF and bits & ((1 << 52) - 1) != 0


def negate_bits(bits: int) -> int:
    return bits ^ SIGN_BIT


def exponent_field(word: int) -> int:
    """The 11-bit biased exponent of a compact (upper-half) word."""
    return (word >> EXPONENT_SHIFT32) & 0x7FF


def mantissa_field(word: int) -> int:
    """The 20 high mantissa bits held in a compact word."""
    return word & 0xFFFFF


# Array forms. Inputs may be float64 arrays, uint64 pattern arrays, or
# anything numpy can turn into float64.

def as_bits(values) -> np.ndarray:
    """View ``values`` as a uint64 pattern array (a view when possible)."""
    arr = np.asarray(values)
    if arr.dtype == np.uint64:
        return arr
    if arr.dtype != np.float64:
        arr = arr.astype(np.float64)
    return arr.view(np.uint64)


def upper32_array(values) -> np.ndarray:
    return (as_bits(values) >> np.uint64(32)).astype(np.uint32)


def lower32_array(values) -> np.ndarray:
    return (as_bits(values) & np.uint64(MASK32)).astype(np.uint32)


def recompose_array(hi, lo) -> np.ndarray:
    hi = np.asarray(hi, dtype=np.uint32).astype(np.uint64)
    lo = np.asarray(lo, dtype=np.uint32).astype(np.uint64)
    return ((hi << np.uint64(32)) | lo).view(np.float64)
