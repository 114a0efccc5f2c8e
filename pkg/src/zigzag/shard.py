"""On-disk shard format and striping.

A shard file is a fixed 29-byte little-endian header followed by the
node's column of every stripe, one symbol per byte, stripe after stripe.
The information stream fills each stripe column by column and starts with
the original file length written as little-endian base-Q digits, where Q
is the field order (exactly 8 bytes when Q = 256).
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .arraycode import ArrayCode
from .errors import FieldError, ShardError
from .galois import FieldSpec

MAGIC = b"ZG01"
VERSION = 1
HEADER = struct.Struct("<4sBBBBHBHHHIII")
MANIFEST = "manifest.json"
MAX_FILE_ORDER = 256


@dataclass(frozen=True)
class ShardHeader:
    construction: int
    r: int
    k: int
    field_p: int
    field_m: int
    poly: int
    alpha: int
    node: int
    rows: int
    stripes: int
    crc: int = 0
    version: int = VERSION

    def pack(self) -> bytes:
        return HEADER.pack(MAGIC, self.version, self.construction, self.r, self.k, self.field_p,
                           self.field_m, self.poly, self.alpha, self.node, self.rows, self.stripes, self.crc)

    @classmethod
    def unpack(cls, raw: bytes) -> "ShardHeader":
        if len(raw) < HEADER.size:
            raise ShardError(f"truncated header ({len(raw)} bytes)")
        magic, version, cons, r, k, fp, fm, poly, alpha, node, rows, stripes, crc = HEADER.unpack(raw[:HEADER.size])
        if magic != MAGIC:
            raise ShardError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ShardError(f"unsupported shard version {version}")
        return cls(cons, r, k, fp, fm, poly, alpha, node, rows, stripes, crc, version)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.field_p, self.field_m, self.poly)

    def same_code(self, other: "ShardHeader") -> bool:
        return replace(self, node=0, crc=0) == replace(other, node=0, crc=0)


def header_for(code: ArrayCode, node: int, stripes: int, crc: int = 0) -> ShardHeader:
    f = code.field
    return ShardHeader(code.construction, code.r, code.k, f.p, f.m, f.poly, code.alpha,
                       node, code.p, stripes, crc)


def shard_path(directory: Path, node: int) -> Path:
    return Path(directory) / f"node{node:02d}.shard"


# -- information stream -----------------------------------------------------

def preamble_length(order: int) -> int:
    d = 1
    while order**d < 1 << 64:
        d += 1
    return d


def length_symbols(length: int, order: int) -> list[int]:
    out = []
    for _ in range(preamble_length(order)):
        length, digit = divmod(length, order)
        out.append(digit)
    return out


def check_file_field(field: FieldSpec) -> None:
    if field.order > MAX_FILE_ORDER:
        raise FieldError(f"file mode needs a field of order <= {MAX_FILE_ORDER}, got {field}")


def stripe_data(data: bytes, code: ArrayCode) -> np.ndarray:
    """Information array (p, q, stripes) for ``data``."""
    f = code.field
    check_file_field(f)
    sym = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    if sym.size and sym.max() >= f.order:
        bad = int(np.argmax(sym >= f.order))
        raise FieldError(f"byte {int(sym[bad])} at offset {bad} is not a symbol of {f}")
    stream = np.concatenate([np.array(length_symbols(len(data), f.order), dtype=np.int64), sym])
    per = code.p * code.q
    stripes = max(1, -(-stream.size // per))
    padded = np.zeros(stripes * per, dtype=np.int64)
    padded[:stream.size] = stream
    return padded.reshape(stripes, code.q, code.p).transpose(2, 1, 0)


def unstripe(info: np.ndarray, code: ArrayCode) -> bytes:
    """Inverse of stripe_data."""
    order = code.field.order
    stream = np.asarray(info).transpose(2, 1, 0).ravel()
    d = preamble_length(order)
    length = 0
    for digit in reversed(stream[:d].tolist()):
        length = length * order + int(digit)
    body = stream[d:d + length]
    if body.size != length:
        raise ShardError(f"stored length {length} exceeds the decoded payload")
    return body.astype(np.uint8).tobytes()


# -- files ------------------------------------------------------------------

def write_shard(directory: Path, code: ArrayCode, node: int, column: np.ndarray) -> Path:
    """Write one node's (p, stripes) column."""
    payload = np.asarray(column, dtype=np.int64).T.astype(np.uint8).tobytes()
    header = header_for(code, node, column.shape[1], zlib.crc32(payload))
    path = shard_path(directory, node)
    path.write_bytes(header.pack() + payload)
    return path


def write_manifest(directory: Path, code: ArrayCode, length: int, stripes: int) -> Path:
    meta = code.describe() | {"length": length, "stripes": stripes}
    path = Path(directory) / MANIFEST
    path.write_text(json.dumps(meta, indent=2) + "\n")
    return path


def read_manifest(directory: Path) -> dict | None:
    path = Path(directory) / MANIFEST
    if not path.exists():
        return None
    return json.loads(path.read_text())


class ShardReader:
    """Selective reader over one shard file.

    Every payload symbol fetched through ``read_rows`` or ``read_all`` is
    recorded, so ``accessed`` is the number of distinct symbols actually
    read from disk.
    """

    def __init__(self, path: Path):
        self.path = Path(path)
        with open(self.path, "rb") as fh:
            self.header = ShardHeader.unpack(fh.read(HEADER.size))
        size = self.path.stat().st_size - HEADER.size
        if size != self.header.rows * self.header.stripes:
            raise ShardError(f"{self.path.name}: payload has {size} bytes, header promises "
                             f"{self.header.rows * self.header.stripes}")
        self._seen: set[tuple[int, int]] = set()

    @property
    def node(self) -> int:
        return self.header.node

    @property
    def accessed(self) -> int:
        return len(self._seen)

    def verify(self) -> bool:
        """Check the payload CRC. Not counted as rebuild access."""
        with open(self.path, "rb") as fh:
            fh.seek(HEADER.size)
            return zlib.crc32(fh.read()) == self.header.crc

    def read_all(self) -> np.ndarray:
        rows, stripes = self.header.rows, self.header.stripes
        with open(self.path, "rb") as fh:
            fh.seek(HEADER.size)
            raw = fh.read(rows * stripes)
        self._seen.update((s, y) for s in range(stripes) for y in range(rows))
        return np.frombuffer(raw, dtype=np.uint8).astype(np.int64).reshape(stripes, rows).T

    def read_rows(self, rows) -> np.ndarray:
        """(p, stripes) array holding only ``rows`` of every stripe; other entries are 0."""
        rows = sorted(set(rows))
        p, stripes = self.header.rows, self.header.stripes
        out = np.zeros((p, stripes), dtype=np.int64)
        runs = _runs(rows)
        with open(self.path, "rb") as fh:
            for s in range(stripes):
                for start, count in runs:
                    fh.seek(HEADER.size + s * p + start)
                    chunk = fh.read(count)
                    out[start:start + count, s] = np.frombuffer(chunk, dtype=np.uint8)
                    self._seen.update((s, y) for y in range(start, start + count))
        return out


def _runs(rows: list[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for y in rows:
        if out and out[-1][0] + out[-1][1] == y:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((y, 1))
    return out


def scan(directory: Path) -> dict[int, ShardReader]:
    """Open every shard in ``directory``, keyed by node; checks header agreement."""
    readers: dict[int, ShardReader] = {}
    for path in sorted(Path(directory).glob("node*.shard")):
        reader = ShardReader(path)
        if reader.node in readers:
            raise ShardError(f"two shards claim node {reader.node}")
        readers[reader.node] = reader
    if not readers:
        raise ShardError(f"no shards found in {directory}")
    first = next(iter(readers.values())).header
    for reader in readers.values():
        if not reader.header.same_code(first):
            raise ShardError(f"{reader.path.name}: header disagrees with {asdict(first)}")
    return readers
