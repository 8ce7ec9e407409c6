"""Binary encoding format (all integers little-endian).

    offset  size  field
    0       4     magic b"OSMC"
    4       2     format version (1)
    6       1     mode (0 general, 1 connected, 2 face)
    7       1     reserved, zero
    8       4     k
    12      4     n (base vertex count)
    16      4     x (tree nodes / versions the index was built over)
    20      4     |T|
    24      8     fingerprint seed
    32      4     node count N, then N u64 node words
    ..      4     version count V, then V u32 root ids
    ..      4+    terminal count (must equal |T|), then |T| u32 ids,
                  |T| u32 base distances, |T| u32 version pointers
    end-4   4     CRC32 of everything before it
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from osmc.compressor.encoding import MODES, Encoding
from osmc.compressor.persistent import MAX_LENGTH, VersionedPrefixIndex
from osmc.errors import CorruptEncoding

MAGIC = b"OSMC"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHBBIIIIQ")


def serialize(enc: Encoding) -> bytes:
    T = len(enc.terminals)
    parts = [
        _HEADER.pack(MAGIC, FORMAT_VERSION, MODES.index(enc.mode), 0, enc.k, enc.n, enc.x, T, enc.seed),
        struct.pack("<I", len(enc.index.pool)),
        np.asarray(enc.index.pool, dtype="<u8").tobytes(),
        struct.pack("<I", len(enc.versions)),
        np.asarray(enc.versions, dtype="<u4").tobytes(),
        struct.pack("<I", T),
        np.asarray(enc.terminals, dtype="<u4").tobytes(),
        np.asarray(enc.base, dtype="<u4").tobytes(),
        np.asarray(enc.pointer, dtype="<u4").tobytes(),
    ]
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes, offset: int):
        self.data = data
        self.pos = offset

    def u32(self, what: str) -> int:
        if self.pos + 4 > len(self.data):
            raise CorruptEncoding(f"truncated before {what}")
        (v,) = struct.unpack_from("<I", self.data, self.pos)
        self.pos += 4
        return v

    def array(self, dtype: str, count: int, what: str) -> np.ndarray:
        size = np.dtype(dtype).itemsize * count
        if self.pos + size > len(self.data):
            raise CorruptEncoding(f"truncated inside {what}")
        out = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.pos)
        self.pos += size
        return out


def deserialize(data: bytes, deep: bool = False) -> Encoding:
    """Parses and validates an encoding.  ``deep`` additionally walks every
    version's tree and checks the stored counts."""
    data = bytes(data)
    if len(data) < _HEADER.size + 4:
        raise CorruptEncoding(f"{len(data)} bytes is shorter than the fixed header")
    magic, fmt, mode, reserved, k, n, x, nt, seed = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CorruptEncoding(f"bad magic {magic!r}")
    if fmt != FORMAT_VERSION:
        raise CorruptEncoding(f"unsupported format version {fmt}")
    (crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) != crc:
        raise CorruptEncoding("checksum mismatch")
    if mode >= len(MODES) or reserved:
        raise CorruptEncoding(f"bad mode byte {mode} / reserved byte {reserved}")
    if k < 3 or 2 * k - 1 > MAX_LENGTH:
        raise CorruptEncoding(f"k = {k} out of range")
    r = _Reader(data[:-4], _HEADER.size)
    pool = r.array("<u8", r.u32("node count"), "node pool")
    versions = r.array("<u4", r.u32("version count"), "version table")
    if r.u32("terminal count") != nt:
        raise CorruptEncoding("terminal count disagrees with header")
    terminals = r.array("<u4", nt, "terminal ids")
    base = r.array("<u4", nt, "base distances")
    pointer = r.array("<u4", nt, "version pointers")
    if r.pos != len(r.data):
        raise CorruptEncoding(f"{len(r.data) - r.pos} trailing bytes")
    if len(versions) == 0:
        raise CorruptEncoding("no versions")
    if versions.max() >= len(pool):
        raise CorruptEncoding("version root outside node pool")
    if nt:
        if terminals.max() >= n or np.any(np.diff(terminals.astype(np.int64)) <= 0):
            raise CorruptEncoding("terminal ids unsorted, repeated or >= n")
        if pointer.max() >= len(versions):
            raise CorruptEncoding("terminal pointer outside version table")
    index = VersionedPrefixIndex(2 * k - 1, [int(w) for w in pool])
    if deep:
        memo: dict = {}
        try:
            for root in versions.tolist():
                index.check_version(root, memo)
        except ValueError as exc:
            raise CorruptEncoding(f"index structure: {exc}") from None
    return Encoding(MODES[mode], k, n, seed, x, index, versions.tolist(), terminals.tolist(),
                    base.tolist(), pointer.tolist())


def save(enc: Encoding, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(enc))


def load(path, deep: bool = False) -> Encoding:
    with open(path, "rb") as fh:
        return deserialize(fh.read(), deep)
