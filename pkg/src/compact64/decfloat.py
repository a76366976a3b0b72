"""32-bit decimal floating point, the baseline compact format.

A word holds a 28-bit two's-complement integer ``M`` in bits 4..31 and a
power ``p`` in bits 0..3, standing for ``M * 10**-p``. Decoding is one
binary64 division ``float(M) / 10**p``; ``p == 15`` marks NA.
"""

from __future__ import annotations

import numpy as np

from .errors import NotRepresentable
from .floatbits import NA, NA_BITS, as_bits, to_bits

M_MIN = -(1 << 27)
M_MAX = (1 << 27) - 1
MAX_POWER = 14
NA_POWER = 15

# Exact: every 10**p with p <= 22 is a binary64 integer.
POW10 = tuple(float(10**p) for p in range(MAX_POWER + 1))
NA_WORD = NA_POWER  # M = 0, p = 15

_POW10_ARRAY = np.array(POW10, dtype=np.float64)


def pack(M: int, p: int) -> int:
    if not M_MIN <= M <= M_MAX:
        raise ValueError(f"M={M} outside 28-bit range")
    if not 0 <= p <= NA_POWER:
        raise ValueError(f"p={p} outside 0..15")
    return ((M & 0xFFFFFFF) << 4) | p


def unpack(word: int) -> tuple[int, int]:
    M = word >> 4
    if M & (1 << 27):
        M -= 1 << 28
    return M, word & 0xF


def dec_decode(word: int) -> float:
    M, p = unpack(word)
    if p == NA_POWER:
        return NA
    return float(M) / POW10[p]


def dec_encode(v: float) -> int:
    """Canonical word for ``v``: the smallest power that round-trips bit-exactly."""
    bits = to_bits(v)
    if bits == NA_BITS:
        return NA_WORD
    if v != v or v in (float("inf"), float("-inf")):
        raise NotRepresentable(v, "not finite")
    for p, scale in enumerate(POW10):
        M = round(v * scale)
        if abs(M) > M_MAX:
            break
        if to_bits(float(M) / scale) == bits:
            return pack(M, p)
    raise NotRepresentable(v, "no power of ten 0..14 with a 28-bit integer")


def dec_decode_array(words) -> np.ndarray:
    w = np.asarray(words, dtype=np.uint32)
    M = w.view(np.int32) >> 4
    p = (w & np.uint32(0xF)).astype(np.int64)
    na = p == NA_POWER
    out = M.astype(np.float64) / _POW10_ARRAY[np.where(na, 0, p)]
    if na.any():
        out[na] = NA
    return out


def dec_encode_array(values) -> np.ndarray:
    """Vectorized :func:`dec_encode`; raises on the first unrepresentable element."""
    bits = as_bits(values)
    v = bits.view(np.float64)
    pending = bits != np.uint64(NA_BITS)
    M_out = np.zeros(len(v), dtype=np.int64)
    p_out = np.full(len(v), NA_POWER, dtype=np.int64)
    with np.errstate(invalid="ignore", over="ignore"):
        for p, scale in enumerate(POW10):
            if not pending.any():
                break
            cand = np.rint(v * scale)
            in_range = np.abs(cand) <= M_MAX
            # Round-trip through the stored integer: rint keeps -0.0, M cannot.
            M = np.where(in_range, cand, 0.0).astype(np.int64)
            ok = pending & in_range & ((M.astype(np.float64) / scale).view(np.uint64) == bits)
            M_out[ok] = M[ok]
            p_out[ok] = p
            pending &= ~ok
    if pending.any():
        k = int(np.argmax(pending))
        raise NotRepresentable(float(v[k]), "no power of ten 0..14 with a 28-bit integer", index=k)
    return (((M_out & 0xFFFFFFF) << 4) | p_out).astype(np.uint32)
