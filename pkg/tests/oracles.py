"""Slow, independent reference implementations used only by the tests.

None of these touch numpy or the package's own conversion paths.
"""

from __future__ import annotations

import struct


def bits(v: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", v))[0]


def double(b: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", b))[0]


def rational_to_bits(p: int, q: int) -> int:
    """Bit pattern of the binary64 nearest to ``p/q`` (ties to even), integers only."""
    if q <= 0:
        raise ValueError("q must be positive")
    sign = 0
    if p < 0:
        sign, p = 1 << 63, -p
    if p == 0:
        return sign
    e = p.bit_length() - q.bit_length() - 53
    while True:
        num, den = (p << -e, q) if e < 0 else (p, q << e)
        if num >= den << 53:
            e += 1
        elif num < den << 52:
            e -= 1
        else:
            break
    if e < -1074:
        e = -1074
        num, den = p << 1074, q
    mant, rem = divmod(num, den)
    if 2 * rem > den or (2 * rem == den and mant & 1):
        mant += 1
    if mant == 1 << 53:
        mant >>= 1
        e += 1
    if e == -1074 and mant < 1 << 52:
        return sign | mant
    biased = e + 52 + 1023
    assert 0 < biased < 0x7FF, "overflow not supported by the oracle"
    return sign | (biased << 52) | (mant - (1 << 52))


def decimal_text_to_bits(text: str) -> int:
    """Correctly rounded conversion of a plain fixed-point decimal string."""
    neg = text.startswith("-")
    body = text.lstrip("+-")
    whole, _, frac = body.partition(".")
    n = int((whole + frac) or "0")
    b = rational_to_bits(n, 10 ** len(frac))
    return b | (1 << 63) if neg else b


def index_by_bitstring(word: int, m: int, e: int, f: int) -> int:
    """Table index built by slicing the word's binary text."""
    s = format(word, "032b")          # s[0] is bit 31
    mantissa = s[12:]                 # 20 bits
    exponent = s[1:12]                # 11 bits
    mant_bits = mantissa[len(mantissa) - m:] if m else ""
    exp_bits = exponent[len(exponent) - f - e:len(exponent) - f] if e else ""
    text = exp_bits + mant_bits
    return int(text, 2) if text else 0


def design_sequential(values, m: int, e: int, f: int):
    """The design loop written out element by element.

    Returns ``(entries, None)`` or ``(None, (index, first_value, clashing_value))``.
    """
    size = 1 << (m + e)
    table = [0] * size
    owner = {}
    for v in values:
        b = bits(v)
        hi, lo = b >> 32, b & 0xFFFFFFFF
        i = index_by_bitstring(hi, m, e, f)
        if i in owner:
            if table[i] != lo:
                return None, (i, owner[i], v)
            continue
        owner[i] = v
        table[i] = lo
    return table, None
