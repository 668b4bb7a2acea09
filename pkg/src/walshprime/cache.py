"""On-disk cache for sieved tables.

Layout, all integers little-endian:

    offset 0   magic    8 bytes ASCII  "WLSHPRM1"
    offset 8   version  u32            currently 1
    offset 12  n        u32            cube dimension
    offset 16  count    u64            2^n
    offset 24  payload  count * f64    table values in index order
    trailer    checksum u64            FNV-1a over the payload bytes

Readers reject wrong magic, unknown versions, count mismatches,
truncated payloads, and checksum failures, all as CacheFormatError;
the caller decides whether to re-sieve.  Writes go through a temp file
in the same directory plus an atomic rename, so a crashed writer never
leaves a half-written file under the final name.
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .cube import CubeVector
from .errors import CacheFormatError

MAGIC = b"WLSHPRM1"
VERSION = 1
_HEADER = struct.Struct("<8sIIQ")
_TRAILER = struct.Struct("<Q")

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def _fnv1a64_python(data: np.ndarray) -> int:
    acc = FNV_OFFSET
    for byte in data.tobytes():
        acc = ((acc ^ byte) * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return acc


try:  # jitted byte loop; half-gigabyte payloads make pure Python painful
    from numba import njit

    @njit(cache=True)
    def _fnv1a64_numba(data: np.ndarray) -> np.uint64:  # pragma: no cover - thin wrapper
        acc = np.uint64(FNV_OFFSET)
        prime = np.uint64(FNV_PRIME)
        for i in range(data.size):
            acc = (acc ^ np.uint64(data[i])) * prime
        return acc

    def _fnv1a64_impl(data: np.ndarray) -> int:
        return int(_fnv1a64_numba(data))

except ImportError:  # pragma: no cover - exercised only without numba
    _fnv1a64_impl = _fnv1a64_python


def fnv1a64(data: bytes | np.ndarray) -> int:
    """FNV-1a of a byte string or of an array's raw little-endian bytes."""
    if isinstance(data, (bytes, bytearray, memoryview)):
        arr = np.frombuffer(bytes(data), dtype=np.uint8)
    else:
        arr = np.ascontiguousarray(data).view(np.uint8).ravel()
    return _fnv1a64_impl(arr)


def default_cache_path(cache_dir: Path | str, n: int) -> Path:
    return Path(cache_dir) / f"von_mangoldt_{n:02d}.bin"


def write_vector(path: Path | str, vec: CubeVector) -> Path:
    """Serialize one cube vector; returns the final path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = np.ascontiguousarray(vec.values, dtype="<f8")
    checksum = fnv1a64(payload)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, VERSION, vec.n, vec.size))
            payload.tofile(fh)
            fh.write(_TRAILER.pack(checksum))
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return path


def read_vector(path: Path | str) -> CubeVector:
    """Deserialize and validate; CacheFormatError on any defect."""
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise CacheFormatError(f"{path}: truncated header")
        magic, version, n, count = _HEADER.unpack(header)
        if magic != MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise CacheFormatError(f"{path}: unsupported version {version}")
        if n < 1 or n > 63 or count != (1 << n):
            raise CacheFormatError(f"{path}: count {count} does not match n={n}")
        payload = np.fromfile(fh, dtype="<f8", count=count)
        if payload.size != count:
            raise CacheFormatError(f"{path}: truncated payload")
        trailer = fh.read(_TRAILER.size)
        if len(trailer) < _TRAILER.size:
            raise CacheFormatError(f"{path}: missing checksum")
        (stored,) = _TRAILER.unpack(trailer)
    actual = fnv1a64(payload)
    if actual != stored:
        raise CacheFormatError(
            f"{path}: checksum mismatch (stored {stored:#018x}, computed {actual:#018x})"
        )
    return CubeVector(int(n), payload.astype(np.float64, copy=False))
