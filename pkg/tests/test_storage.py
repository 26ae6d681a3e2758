import numpy as np
import pytest

from dedekind.errors import CacheFormatError
from dedekind.intervals import build_down_table, lattice
from dedekind.storage import (
    CacheStore,
    read_down,
    read_lattice,
    read_orbits,
    write_down,
    write_lattice,
    write_orbits,
)
from dedekind.symmetry import build_orbits


@pytest.mark.parametrize("n", range(6))
def test_roundtrip(tmp_path, n):
    t = lattice(n)
    write_lattice(tmp_path / "t", t)
    back = read_lattice(tmp_path / "t")
    assert back.n == n and np.array_equal(back.values, t.values)

    down = build_down_table(t)
    write_down(tmp_path / "d", down)
    assert np.array_equal(read_down(tmp_path / "d", t).counts, down.counts)

    orb = build_orbits(t)
    write_orbits(tmp_path / "o", orb)
    back_orb = read_orbits(tmp_path / "o", t)
    for name in ("class_id", "reps", "gamma"):
        assert np.array_equal(getattr(back_orb, name), getattr(orb, name))


def test_lattice_file_layout(tmp_path):
    write_lattice(tmp_path / "t", lattice(2))
    raw = (tmp_path / "t").read_bytes()
    assert raw[:4] == b"DDKD" and raw[4] == 1 and raw[5] == 2
    assert int.from_bytes(raw[6:14], "little") == 6
    # one byte per element at n = 2, ascending
    assert list(raw[14:]) == [0b0000, 0b0001, 0b0011, 0b0101, 0b0111, 0b1111]


def test_bad_magic_and_version(tmp_path):
    write_lattice(tmp_path / "t", lattice(3))
    raw = bytearray((tmp_path / "t").read_bytes())
    bad = tmp_path / "bad"
    bad.write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(CacheFormatError):
        read_lattice(bad)
    raw[4] = 9
    bad.write_bytes(bytes(raw))
    with pytest.raises(CacheFormatError, match="version"):
        read_lattice(bad)
    bad.write_bytes(bytes(raw[:20]))
    with pytest.raises(CacheFormatError):
        read_lattice(bad)


def test_store_hit_equals_miss(tmp_path):
    first = CacheStore(tmp_path)
    t, d, o = first.table(4), first.down(4), first.orbits(4)
    assert first.path("ddkd", 4).exists() and first.path("ddkt", 4).exists()
    second = CacheStore(tmp_path)
    assert np.array_equal(second.table(4).values, t.values)
    assert np.array_equal(second.down(4).counts, d.counts)
    assert np.array_equal(second.orbits(4).gamma, o.gamma)


def test_store_rebuilds_corrupt_file(tmp_path):
    store = CacheStore(tmp_path)
    store.table(3)
    store.path("ddkd", 3).write_bytes(b"DDKD\x07garbage")
    fresh = CacheStore(tmp_path)
    assert len(fresh.table(3)) == 20
    assert read_lattice(fresh.path("ddkd", 3)).n == 3


def test_env_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("DDK_CACHE_DIR", str(tmp_path / "env"))
    assert CacheStore().directory == tmp_path / "env"
