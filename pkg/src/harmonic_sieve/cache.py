"""HSV1 prime-cache files.

Layout, all little-endian::

    b"HSV1"          magic
    u8               version (1)
    u64              bound
    u64 * words      odd-index bitset, bit i of the stream <-> n = 2*i + 1,
                     bit set = composite; words = ceil(((bound + 1) // 2) / 64)

Only odd numbers are stored, so a loaded table reports even numbers the
way the classical sieve does (2 prime, every other even composite).
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .engine import ClassificationTable, Provenance, _pack, even_index_count, odd_index_count

MAGIC = b"HSV1"
VERSION = 1
_HEADER = struct.Struct("<4sBQ")


class CacheFormatError(ValueError):
    pass


def word_count(bound: int) -> int:
    return -(-odd_index_count(bound) // 64)


def to_bytes(table: ClassificationTable) -> bytes:
    payload = table.odd_bits.tobytes()
    assert len(payload) == 8 * word_count(table.bound)
    return _HEADER.pack(MAGIC, VERSION, table.bound) + payload


def from_bytes(data: bytes) -> ClassificationTable:
    if len(data) < _HEADER.size:
        raise CacheFormatError("file too short for an HSV1 header")
    magic, version, bound = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"unsupported HSV1 version {version}")
    if bound < 2:
        raise CacheFormatError(f"bound {bound} below 2")
    expected = _HEADER.size + 8 * word_count(bound)
    if len(data) != expected:
        raise CacheFormatError(f"expected {expected} bytes for bound {bound}, got {len(data)}")
    odd = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size).copy()
    bits = np.unpackbits(odd, bitorder="little")
    n_odd = odd_index_count(bound)
    if not bits[0]:
        raise CacheFormatError("bit for n=1 must be set")
    if bits[n_odd:].any():
        raise CacheFormatError("padding bits past bound must be clear")

    even = np.ones(even_index_count(bound), dtype=bool)
    even[1] = False
    return ClassificationTable(bound, odd, _pack(even), Provenance.classical())


def write_cache(table: ClassificationTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(to_bytes(table))
    os.replace(tmp, path)
    return path


def read_cache(path: str | os.PathLike) -> ClassificationTable:
    return from_bytes(Path(path).read_bytes())


def read_bound(path: str | os.PathLike) -> int:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    if len(head) < _HEADER.size:
        raise CacheFormatError("file too short for an HSV1 header")
    magic, version, bound = _HEADER.unpack(head)
    if magic != MAGIC or version != VERSION:
        raise CacheFormatError(f"not an HSV1 v{VERSION} file")
    return bound
