"""CFT1 table files.

Layout, little-endian throughout::

    "CFT1"  version:u8=1  m:u8  e:u8  f:u8  kind:u8 (0 direct, 1 indirect)
    direct:   2**(m+e) x u32 entries
    indirect: count:u32, 2**(m+e) x u16 indices, count x u32 values
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .designer import DirectTable, IndirectTable, SchemeConfig
from .errors import TableFormatError

MAGIC = b"CFT1"
VERSION = 1
KIND_DIRECT = 0
KIND_INDIRECT = 1

_HEADER = struct.Struct("<4sBBBBB")
_COUNT = struct.Struct("<I")
HEADER_SIZE = _HEADER.size


def dumps(table: DirectTable | IndirectTable) -> bytes:
    c = table.config
    if isinstance(table, IndirectTable):
        head = _HEADER.pack(MAGIC, VERSION, c.m, c.e, c.f, KIND_INDIRECT)
        return b"".join((
            head,
            _COUNT.pack(len(table.values)),
            table.index16.astype("<u2").tobytes(),
            table.values.astype("<u4").tobytes(),
        ))
    head = _HEADER.pack(MAGIC, VERSION, c.m, c.e, c.f, KIND_DIRECT)
    return head + table.entries.astype("<u4").tobytes()


def loads(data: bytes) -> DirectTable | IndirectTable:
    if len(data) < HEADER_SIZE:
        raise TableFormatError("truncated header")
    magic, version, m, e, f, kind = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise TableFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise TableFormatError(f"unsupported version {version}")
    try:
        config = SchemeConfig(m, e, f)
    except ValueError as exc:
        raise TableFormatError(f"bad scheme parameters: {exc}") from None
    size = config.size
    body = memoryview(data)[HEADER_SIZE:]

    if kind == KIND_DIRECT:
        if len(body) != 4 * size:
            raise TableFormatError(f"direct table needs {4 * size} bytes, found {len(body)}")
        entries = np.frombuffer(body, dtype="<u4").astype(np.uint32)
        entries.setflags(write=False)
        return DirectTable(config, entries)

    if kind == KIND_INDIRECT:
        if len(body) < _COUNT.size:
            raise TableFormatError("truncated indirect table")
        (count,) = _COUNT.unpack_from(body)
        expected = _COUNT.size + 2 * size + 4 * count
        if len(body) != expected:
            raise TableFormatError(f"indirect table needs {expected} bytes, found {len(body)}")
        if not 1 <= count <= 1 << 16:
            raise TableFormatError(f"distinct count {count} out of range")
        start = _COUNT.size
        index16 = np.frombuffer(body[start:start + 2 * size], dtype="<u2").astype(np.uint16)
        values = np.frombuffer(body[start + 2 * size:], dtype="<u4").astype(np.uint32)
        if size and int(index16.max()) >= count:
            raise TableFormatError(f"index {int(index16.max())} exceeds distinct count {count}")
        index16.setflags(write=False)
        values.setflags(write=False)
        return IndirectTable(config, index16, values)

    raise TableFormatError(f"unknown table kind {kind}")


def save_table(path: str | os.PathLike, table: DirectTable | IndirectTable) -> int:
    data = dumps(table)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load_table(path: str | os.PathLike) -> DirectTable | IndirectTable:
    with open(path, "rb") as fh:
        return loads(fh.read())
