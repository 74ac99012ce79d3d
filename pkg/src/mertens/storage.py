"""Binary table persistence, checkpoints, and CSV emission.

Table file layout (MTAB):

    offset 0   magic bytes b"MTAB"
    offset 4   format version, unsigned 32-bit little-endian (currently 1)
    offset 8   payload kind byte: 0 = Moebius values as signed 8-bit,
               1 = Mertens values as signed 64-bit little-endian
    offset 9   count, unsigned 64-bit little-endian
    offset 17  raw values for indices 1..count
    tail       checksum: sum of all preceding bytes mod 2**64,
               unsigned 64-bit little-endian

Checkpoint files (MCKP) snapshot an incremental computation: the Moebius
prefix plus the running Mertens value, with the same checksum rule.

All writes go through a temporary file in the target directory followed by
an atomic rename, so a crash never leaves a truncated file under the final
name.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import IntegrityError

MAGIC_TABLE = b"MTAB"
MAGIC_CHECKPOINT = b"MCKP"
FORMAT_VERSION = 1

KIND_MOBIUS = 0
KIND_MERTENS = 1

MOBIUS_FILENAME = "mu.mtab"
MERTENS_FILENAME = "mertens.mtab"

_HEADER = struct.Struct("<4sIBQ")  # magic, version, kind, count
_CHECKSUM = struct.Struct("<Q")
_KIND_DTYPES = {KIND_MOBIUS: np.dtype("<i1"), KIND_MERTENS: np.dtype("<i8")}


def _byte_sum(buf: bytes | memoryview) -> int:
    return int(np.frombuffer(buf, dtype=np.uint8).sum(dtype=np.uint64))


def _atomic_write(path: Path, blob: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(blob)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_table(path: str | Path, values: np.ndarray, kind: int) -> None:
    """Persist a value array (index 1 at position 0) as an MTAB file."""
    if kind not in _KIND_DTYPES:
        raise ValueError(f"unknown payload kind {kind}")
    path = Path(path)
    payload = np.ascontiguousarray(values, dtype=_KIND_DTYPES[kind]).tobytes()
    head = _HEADER.pack(MAGIC_TABLE, FORMAT_VERSION, kind, len(values))
    checksum = (_byte_sum(head) + _byte_sum(payload)) % 2**64
    _atomic_write(path, head + payload + _CHECKSUM.pack(checksum))


def read_table(path: str | Path, expected_kind: int | None = None) -> tuple[int, np.ndarray]:
    """Load an MTAB file, returning (kind, values). Verifies the checksum."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _HEADER.size + _CHECKSUM.size:
        raise IntegrityError(f"{path}: file shorter than a valid table header")
    magic, version, kind, count = _HEADER.unpack_from(blob)
    if magic != MAGIC_TABLE:
        raise IntegrityError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise IntegrityError(f"{path}: unsupported format version {version}")
    if kind not in _KIND_DTYPES:
        raise IntegrityError(f"{path}: unknown payload kind {kind}")
    if expected_kind is not None and kind != expected_kind:
        raise IntegrityError(f"{path}: payload kind {kind}, expected {expected_kind}")
    dtype = _KIND_DTYPES[kind]
    expected_len = _HEADER.size + count * dtype.itemsize + _CHECKSUM.size
    if len(blob) != expected_len:
        raise IntegrityError(f"{path}: size {len(blob)}, expected {expected_len} for count {count}")
    (stored,) = _CHECKSUM.unpack_from(blob, len(blob) - _CHECKSUM.size)
    actual = _byte_sum(memoryview(blob)[: -_CHECKSUM.size])
    if stored != actual:
        raise IntegrityError(f"{path}: checksum mismatch (stored {stored}, computed {actual})")
    values = np.frombuffer(blob, dtype=dtype, count=count, offset=_HEADER.size)
    return kind, values.copy()


_CKPT_HEAD = struct.Struct("<4sIQq")  # magic, version, n, mertens value


def write_checkpoint(path: str | Path, mu_values: np.ndarray, mertens_value: int) -> None:
    """Snapshot incremental state: mu(1..n) plus M(n)."""
    path = Path(path)
    payload = np.ascontiguousarray(mu_values, dtype=np.int8).tobytes()
    head = _CKPT_HEAD.pack(MAGIC_CHECKPOINT, FORMAT_VERSION, len(mu_values), mertens_value)
    checksum = (_byte_sum(head) + _byte_sum(payload)) % 2**64
    _atomic_write(path, head + payload + _CHECKSUM.pack(checksum))


def read_checkpoint(path: str | Path) -> tuple[np.ndarray, int]:
    """Load a checkpoint, returning (mu values through n, M(n))."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _CKPT_HEAD.size + _CHECKSUM.size:
        raise IntegrityError(f"{path}: file shorter than a valid checkpoint header")
    magic, version, n, m_value = _CKPT_HEAD.unpack_from(blob)
    if magic != MAGIC_CHECKPOINT:
        raise IntegrityError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise IntegrityError(f"{path}: unsupported format version {version}")
    expected_len = _CKPT_HEAD.size + n + _CHECKSUM.size
    if len(blob) != expected_len:
        raise IntegrityError(f"{path}: size {len(blob)}, expected {expected_len} for n {n}")
    (stored,) = _CHECKSUM.unpack_from(blob, len(blob) - _CHECKSUM.size)
    actual = _byte_sum(memoryview(blob)[: -_CHECKSUM.size])
    if stored != actual:
        raise IntegrityError(f"{path}: checksum mismatch (stored {stored}, computed {actual})")
    mu = np.frombuffer(blob, dtype=np.int8, count=n, offset=_CKPT_HEAD.size)
    return mu.copy(), m_value


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips the double; locale-free."""
    return repr(float(x))


def write_csv(path: str | Path, header: str, rows) -> None:
    """Write rows (iterables of already-formatted cells) under a header line.

    LF line endings and '.' decimals regardless of platform or locale.
    """
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(cell) for cell in row) + "\n")


def export_table_csv(path: str | Path, values: np.ndarray) -> None:
    """Table as `n,value` rows, one per index starting at 1."""
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("n,value\n")
        chunk = 1 << 18
        for start in range(0, len(values), chunk):
            part = values[start : start + chunk]
            lines = [f"{start + i + 1},{int(v)}" for i, v in enumerate(part)]
            fh.write("\n".join(lines) + "\n")
