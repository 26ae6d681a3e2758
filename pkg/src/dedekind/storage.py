"""Binary cache files for lattices, down tables and orbit tables.

All three share a header: 4-byte magic, version byte, arity byte, then an
8-byte little-endian element count.

* ``DDKD`` -- elements in ascending order, each ``ceil(2**n / 8)`` bytes LE.
* ``DDKT`` -- one 8-byte LE down count per element, in lattice order.
* ``DDKO`` -- one 8-byte LE canonical value per element, then an 8-byte LE
  class count and one 4-byte LE orbit size per class (classes in
  ascending order of their canonical value).
"""
from __future__ import annotations

import logging
import os
import struct
from pathlib import Path

import numpy as np

from .errors import CacheFormatError
from .intervals import DownTable, build_down_table, lattice
from .mbf import PosetTable, width
from .symmetry import OrbitTable, build_orbits

log = logging.getLogger(__name__)

VERSION = 1
_HEADER = struct.Struct("<4sBBQ")
DEFAULT_CACHE_DIR = ".ddk-cache"
CACHE_ENV = "DDK_CACHE_DIR"


def element_bytes(n: int) -> int:
    return (width(n) + 7) // 8


def _write(path: Path, magic: bytes, n: int, count: int, *payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(magic, VERSION, n, count))
        for chunk in payload:
            fh.write(chunk)
    os.replace(tmp, path)


def _read(path: Path, magic: bytes) -> tuple[int, int, memoryview]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    got, version, n, count = _HEADER.unpack_from(data)
    if got != magic:
        raise CacheFormatError(f"{path}: magic {got!r}, expected {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: version {version}, expected {VERSION}")
    return n, count, memoryview(data)[_HEADER.size:]


def _pack_words(values: np.ndarray, nbytes: int) -> bytes:
    raw = np.ascontiguousarray(values, dtype="<u8").view(np.uint8).reshape(-1, 8)
    return raw[:, :nbytes].tobytes()


def _unpack_words(buf: memoryview, count: int, nbytes: int) -> np.ndarray:
    raw = np.frombuffer(buf, dtype=np.uint8, count=count * nbytes).reshape(count, nbytes)
    full = np.zeros((count, 8), dtype=np.uint8)
    full[:, :nbytes] = raw
    return full.view("<u8").ravel().astype(np.uint64)


def write_lattice(path, table: PosetTable) -> None:
    _write(Path(path), b"DDKD", table.n, len(table), _pack_words(table.values, element_bytes(table.n)))


def read_lattice(path) -> PosetTable:
    n, count, body = _read(Path(path), b"DDKD")
    nbytes = element_bytes(n)
    if len(body) != count * nbytes:
        raise CacheFormatError(f"{path}: body holds {len(body)} bytes, expected {count * nbytes}")
    return PosetTable(n, _unpack_words(body, count, nbytes))


def write_down(path, down: DownTable) -> None:
    counts = np.ascontiguousarray(down.counts, dtype="<u8")
    _write(Path(path), b"DDKT", down.n, len(counts), counts.tobytes())


def read_down(path, table: PosetTable) -> DownTable:
    n, count, body = _read(Path(path), b"DDKT")
    if n != table.n or count != len(table) or len(body) != 8 * count:
        raise CacheFormatError(f"{path}: does not match D_{table.n}")
    counts = np.frombuffer(body, dtype="<u8", count=count).astype(np.int64)
    counts.setflags(write=False)
    return DownTable(table, counts)


def write_orbits(path, orbits: OrbitTable) -> None:
    canon = np.ascontiguousarray(orbits.canon, dtype="<u8").tobytes()
    gammas = np.ascontiguousarray(orbits.gamma, dtype="<u4").tobytes()
    _write(Path(path), b"DDKO", orbits.n, len(orbits.class_id), canon,
           struct.pack("<Q", orbits.r), gammas)


def read_orbits(path, table: PosetTable) -> OrbitTable:
    n, count, body = _read(Path(path), b"DDKO")
    if n != table.n or count != len(table) or len(body) < 8 * count + 8:
        raise CacheFormatError(f"{path}: does not match D_{table.n}")
    canon = np.frombuffer(body, dtype="<u8", count=count).astype(np.uint64)
    (r,) = struct.unpack_from("<Q", body, 8 * count)
    if len(body) != 8 * count + 8 + 4 * r:
        raise CacheFormatError(f"{path}: orbit size block has the wrong length")
    gamma = np.frombuffer(body, dtype="<u4", count=r, offset=8 * count + 8).astype(np.int64)
    rep_values = np.unique(canon)
    if len(rep_values) != r:
        raise CacheFormatError(f"{path}: {len(rep_values)} distinct canonical values, header says {r}")
    reps = table.indices(rep_values)
    class_id = np.searchsorted(rep_values, canon).astype(np.int64)
    for arr in (class_id, reps, gamma):
        arr.setflags(write=False)
    return OrbitTable(table, class_id, reps, gamma)


class CacheStore:
    """Loads tables from a cache directory, building and saving on a miss.

    Files that fail validation are rebuilt. Hits and misses return identical
    tables.
    """

    def __init__(self, directory: str | os.PathLike | None = None, *, persist_from: int = 0):
        if directory is None:
            directory = os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR)
        self.directory = Path(directory)
        self.persist_from = persist_from
        self._tables: dict[int, PosetTable] = {}
        self._downs: dict[int, DownTable] = {}
        self._orbits: dict[int, OrbitTable] = {}

    def path(self, kind: str, n: int) -> Path:
        return self.directory / f"d{n}.{kind}"

    def _load(self, path: Path, reader, *args):
        if not path.exists():
            return None
        try:
            return reader(path, *args)
        except (CacheFormatError, KeyError, ValueError) as exc:
            log.warning("ignoring cache file %s: %s", path, exc)
            return None

    def table(self, n: int) -> PosetTable:
        if n not in self._tables:
            path = self.path("ddkd", n)
            table = self._load(path, read_lattice)
            if table is None or table.n != n:
                table = lattice(n)
                if n >= self.persist_from:
                    write_lattice(path, table)
            self._tables[n] = table
        return self._tables[n]

    def orbits(self, n: int) -> OrbitTable:
        if n not in self._orbits:
            table = self.table(n)
            path = self.path("ddko", n)
            orbits = self._load(path, read_orbits, table)
            if orbits is None:
                orbits = build_orbits(table)
                if n >= self.persist_from:
                    write_orbits(path, orbits)
            self._orbits[n] = orbits
        return self._orbits[n]

    def down(self, n: int) -> DownTable:
        if n not in self._downs:
            table = self.table(n)
            path = self.path("ddkt", n)
            down = self._load(path, read_down, table)
            if down is None:
                down = build_down_table(table, self.orbits(n) if n == 6 else None)
                if n >= self.persist_from:
                    write_down(path, down)
            self._downs[n] = down
        return self._downs[n]
