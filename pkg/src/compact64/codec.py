"""Encoding and decoding of compact words under a designed scheme."""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .designer import (
    MAX_INDIRECT_VALUES,
    DirectTable,
    IndirectTable,
    SchemeConfig,
    build_indirect,
    design,
    index_array,
    index_of,
)
from .errors import NotRepresentable, TableFormatError
from .floatbits import as_bits, from_bits, to_bits, upper32
from .tablefile import load_table
from .valueset import builtin_set

BUILTIN_CONFIGS: dict[str, SchemeConfig] = {
    "A": SchemeConfig(3),
    "B": SchemeConfig(5),
    "C": SchemeConfig(7),
    "D": SchemeConfig(10),
    "E": SchemeConfig(12),
    "F": SchemeConfig(14),
    "W": SchemeConfig(10, 4, 1),
    "X": SchemeConfig(10, 5, 1),
    "Y": SchemeConfig(12, 5, 1),
    "Z": SchemeConfig(14, 5, 1),
}
BUILTIN_NAMES = tuple(BUILTIN_CONFIGS)

CACHE_ENV = "COMPACT64_TABLE_CACHE"


@dataclass(frozen=True, eq=False)
class SchemeHandle:
    config: SchemeConfig
    entries: np.ndarray = field(repr=False)
    indirect: IndirectTable | None = field(default=None, repr=False)
    name: str | None = None
    # Python-int copy of entries; scalar lookups on it beat numpy indexing.
    _entry_list: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_entry_list", self.entries.tolist())

    @classmethod
    def from_table(cls, table: DirectTable | IndirectTable, name: str | None = None) -> "SchemeHandle":
        """Wrap a table, adding the indirect form whenever 16 bits can index it."""
        if isinstance(table, IndirectTable):
            return cls(table.config, table.to_direct().entries, table, name)
        indirect = None
        if len(np.unique(table.entries)) <= MAX_INDIRECT_VALUES:
            indirect = build_indirect(table)
        return cls(table.config, table.entries, indirect, name)

    @property
    def direct_bytes(self) -> int:
        return 4 * self.config.size

    @property
    def label(self) -> str:
        return self.name or str(self.config)

    def __repr__(self) -> str:
        return f"SchemeHandle({self.label}, {self.config})"


def encode_unchecked(v: float) -> int:
    """Compact word of ``v``; correct only if ``v`` is known to decode back."""
    return upper32(v)


def decode(w: int, s: SchemeHandle) -> float:
    return from_bits((w << 32) | s._entry_list[index_of(w, s.config)])


def decode_indirect(w: int, s: SchemeHandle) -> float:
    if s.indirect is None:
        raise ValueError(f"scheme {s.label} has no indirect table")
    lo = int(s.indirect.values[s.indirect.index16[index_of(w, s.config)]])
    return from_bits((w << 32) | lo)


def is_representable(v: float, s: SchemeHandle) -> bool:
    bits = to_bits(v)
    w = bits >> 32
    return s._entry_list[index_of(w, s.config)] == bits & 0xFFFFFFFF


def encode_checked(v: float, s: SchemeHandle) -> int:
    """Compact word of ``v``, or :class:`NotRepresentable` if it would not decode to ``v``."""
    if not is_representable(v, s):
        raise NotRepresentable(v, f"scheme {s.label}")
    return upper32(v)


def representable_mask(values, s: SchemeHandle) -> np.ndarray:
    bits = as_bits(values)
    hi = bits >> np.uint64(32)
    return s.entries[index_array(hi, s.config)] == (bits & np.uint64(0xFFFFFFFF))


def encode_array(values, s: SchemeHandle | None = None) -> np.ndarray:
    """Compact words for an array of doubles.

    With a scheme, every element is verified and the first failure raises
    :class:`NotRepresentable` carrying its index.
    """
    bits = as_bits(values)
    if s is not None:
        ok = representable_mask(bits, s)
        if not ok.all():
            k = int(np.argmin(ok))
            raise NotRepresentable(from_bits(int(bits[k])), f"scheme {s.label}", index=k)
    return (bits >> np.uint64(32)).astype(np.uint32)


def decode_array(words, s: SchemeHandle, path: str = "direct") -> np.ndarray:
    w = np.asarray(words, dtype=np.uint32)
    idx = index_array(w, s.config)
    if path == "direct":
        lo = s.entries[idx]
    elif path == "indirect":
        if s.indirect is None:
            raise ValueError(f"scheme {s.label} has no indirect table")
        lo = s.indirect.values[s.indirect.index16[idx]]
    else:
        raise ValueError(f"unknown decode path {path!r}")
    return ((w.astype(np.uint64) << np.uint64(32)) | lo.astype(np.uint64)).view(np.float64)


_builtin: dict[str, SchemeHandle] = {}
_builtin_lock = threading.Lock()


def _load_cached(name: str) -> SchemeHandle | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root) / f"{name}.cft"
    if not path.is_file():
        return None
    table = load_table(path)
    if table.config != BUILTIN_CONFIGS[name]:
        raise TableFormatError(f"{path}: holds {table.config}, scheme {name} needs {BUILTIN_CONFIGS[name]}")
    return SchemeHandle.from_table(table, name)


def builtin_scheme(name: str) -> SchemeHandle:
    """Handle for one of the ten named schemes, designed once per process.

    If ``$COMPACT64_TABLE_CACHE`` names a directory holding ``<name>.cft``,
    that table is loaded instead of redesigned.
    """
    key = name.upper()
    if key not in BUILTIN_CONFIGS:
        raise KeyError(f"unknown scheme {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    handle = _builtin.get(key)
    if handle is not None:
        return handle
    with _builtin_lock:
        handle = _builtin.get(key)
        if handle is None:
            handle = _load_cached(key)
            if handle is None:
                table = design(BUILTIN_CONFIGS[key], builtin_set(key))
                handle = SchemeHandle.from_table(table, key)
            _builtin[key] = handle
    return handle


def builtin_schemes() -> list[SchemeHandle]:
    return [builtin_scheme(n) for n in BUILTIN_NAMES]
