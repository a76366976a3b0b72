"""Design of low-mantissa lookup tables.

A scheme takes ``m`` bits from the bottom of the 20-bit high-mantissa field
of a compact word and ``e`` bits of its exponent field, starting ``f`` bits
above the bottom of that field. Mantissa bits form the low end of the index:

    index = (mantissa & (2**m - 1)) | ((exponent >> f) & (2**e - 1)) << m

The table stores, per index, the low 32 bits that complete every target value
landing there. Design fails only when two targets need different low words
at the same index; repeats of an identical low word (a value and its
negation, or one number spelled by two forms) are accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConflictError, Infeasible, TooManyDistinctError
from .floatbits import MASK32, as_bits, from_bits
from .valueset import ValueSet

MAX_INDEX_BITS = 26
MAX_INDIRECT_VALUES = 1 << 16
DEFAULT_ENTRY = 0


@dataclass(frozen=True)
class SchemeConfig:
    m: int
    e: int = 0
    f: int = 0

    def __post_init__(self):
        if not 0 <= self.m <= 20:
            raise ValueError(f"m must be in 0..20, got {self.m}")
        if not 0 <= self.e <= 11:
            raise ValueError(f"e must be in 0..11, got {self.e}")
        if self.f < 0 or self.f + self.e > 11:
            raise ValueError(f"need f >= 0 and f + e <= 11, got f={self.f}, e={self.e}")

    @property
    def index_bits(self) -> int:
        return self.m + self.e

    @property
    def size(self) -> int:
        return 1 << (self.m + self.e)

    def __str__(self) -> str:
        return f"m={self.m} e={self.e} f={self.f}"


def index_of(word: int, c: SchemeConfig) -> int:
    """Table index of a compact word under ``c``."""
    mant = word & ((1 << c.m) - 1)
    expo = (word >> (20 + c.f)) & ((1 << c.e) - 1)
    return mant | (expo << c.m)


def index_array(words, c: SchemeConfig) -> np.ndarray:
    """Vectorized :func:`index_of`; returns int64 indices."""
    w = np.asarray(words).astype(np.int64)
    idx = w & ((1 << c.m) - 1)
    if c.e:
        idx |= ((w >> (20 + c.f)) & ((1 << c.e) - 1)) << c.m
    return idx


@dataclass(frozen=True)
class DirectTable:
    config: SchemeConfig
    entries: np.ndarray = field(repr=False)
    # Count of slots claimed by target values; None when loaded from a file.
    used_entries: int | None = None

    def __post_init__(self):
        if self.entries.dtype != np.uint32 or self.entries.shape != (self.config.size,):
            raise ValueError(f"entries must be uint32 of length {self.config.size}")


@dataclass(frozen=True)
class IndirectTable:
    config: SchemeConfig
    index16: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.index16.dtype != np.uint16 or self.index16.shape != (self.config.size,):
            raise ValueError(f"index16 must be uint16 of length {self.config.size}")
        if self.values.dtype != np.uint32 or not 1 <= len(self.values) <= MAX_INDIRECT_VALUES:
            raise ValueError("values must be a non-empty uint32 array of at most 65536 words")
        if len(self.index16) and int(self.index16.max()) >= len(self.values):
            raise ValueError("index16 points past the value array")

    def to_direct(self) -> DirectTable:
        return DirectTable(self.config, _frozen(self.values[self.index16]))


@dataclass(frozen=True)
class SchemeStats:
    table_entries: int
    used_entries: int | None
    distinct_entries: int
    direct_bytes: int
    indirect_bytes: int


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class _Targets:
    """Target bits split once into compact words and low words.

    Lets a search over ``m`` redo only the index step.
    """

    def __init__(self, d):
        bits = d.bits if isinstance(d, ValueSet) else as_bits(d).ravel()
        if len(bits) == 0:
            raise ValueError("cannot design a table for an empty value set")
        self.bits = bits
        self.hi = (bits >> np.uint64(32)).astype(np.int64)
        self.lo = (bits & np.uint64(MASK32)).astype(np.uint32)


def _check_cap(c: SchemeConfig, allow_large: bool):
    if c.index_bits > MAX_INDEX_BITS and not allow_large:
        raise ValueError(
            f"m+e={c.index_bits} exceeds {MAX_INDEX_BITS} "
            f"({4 * c.size} byte table); pass allow_large=True to override"
        )


def _design(c: SchemeConfig, t: _Targets) -> DirectTable:
    idx = index_array(t.hi, c)
    # First visitor of each index sets its entry; any later visitor with
    # a different low word is the conflict the sequential procedure reports.
    slots, first, inverse = np.unique(idx, return_index=True, return_inverse=True)
    claimed = t.lo[first]
    clash = t.lo != claimed[inverse.ravel()]
    if clash.any():
        k = int(np.argmax(clash))
        owner = int(first[inverse.ravel()[k]])
        raise ConflictError(
            index=int(idx[k]),
            existing_entry=int(t.lo[owner]),
            existing_value=from_bits(int(t.bits[owner])),
            offending_value=from_bits(int(t.bits[k])),
        )
    entries = np.full(c.size, DEFAULT_ENTRY, dtype=np.uint32)
    entries[slots] = claimed
    return DirectTable(c, _frozen(entries), used_entries=len(slots))


def design(c: SchemeConfig, d, allow_large: bool = False) -> DirectTable:
    """Fill a table so every member of ``d`` decodes exactly.

    ``d`` is a :class:`ValueSet` or any sequence of doubles (or uint64
    patterns); for a plain sequence, conflicts are reported in its order.
    Raises :class:`ConflictError` when two members need different low words
    at one index.
    """
    _check_cap(c, allow_large)
    return _design(c, _Targets(d))


def search_min_m(d, e: int = 0, f: int = 0, m_max: int = 20, allow_large: bool = False) -> SchemeConfig:
    """Smallest ``m`` in ``0..m_max`` at which ``d`` is designable.

    Feasibility is monotone in ``m``: an extra index bit only splits the
    values sharing a slot, so an upward scan stops at the minimum.
    """
    if not 0 <= m_max <= 20:
        raise ValueError("m_max must be in 0..20")
    targets = _Targets(d)
    last = None
    for m in range(m_max + 1):
        c = SchemeConfig(m, e, f)
        _check_cap(c, allow_large)
        try:
            _design(c, targets)
        except ConflictError as exc:
            last = exc
            continue
        return c
    raise Infeasible(f"no m <= {m_max} works with e={e}, f={f}; last conflict: {last}")


def stats(t: DirectTable) -> SchemeStats:
    size = t.config.size
    distinct = len(np.unique(t.entries))
    return SchemeStats(
        table_entries=size,
        used_entries=t.used_entries,
        distinct_entries=distinct,
        direct_bytes=4 * size,
        indirect_bytes=2 * size + 4 * distinct,
    )


def build_indirect(t: DirectTable) -> IndirectTable:
    """Deduplicate ``t`` into 16-bit slot indices plus a value array.

    Values keep first-appearance order scanning from index 0.
    """
    uniq, first, inverse = np.unique(t.entries, return_index=True, return_inverse=True)
    if len(uniq) > MAX_INDIRECT_VALUES:
        raise TooManyDistinctError(
            f"{len(uniq)} distinct entries; a 16-bit index addresses at most {MAX_INDIRECT_VALUES}"
        )
    order = np.argsort(first, kind="stable")
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[order] = np.arange(len(uniq))
    index16 = rank[inverse.ravel()].astype(np.uint16)
    values = uniq[order].astype(np.uint32)
    return IndirectTable(t.config, _frozen(index16), _frozen(values))
