"""The compiled and pure-Python kernels must be bit-for-bit interchangeable."""

import struct

import numpy as np
import pytest

from dxhash import prg
from dxhash import _kernels as kernels
from dxhash._kernels import _python as py_impl

try:
    from dxhash._kernels import _native as native_impl
except ImportError:  # pragma: no cover - source-only install
    native_impl = None

needs_native = pytest.mark.skipif(
    native_impl is None, reason="compiled kernels not built"
)

IMPLS = [py_impl] + ([native_impl] if native_impl is not None else [])


def _rng():
    return np.random.default_rng(20240817)


def test_selected_impl_is_reported():
    assert kernels.IMPL_NAME in ("native", "python")


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.IMPL)
def test_digest8_matches_scalar_digest(impl):
    vals = _rng().integers(0, 2**64, size=500, dtype=np.uint64)
    out = impl.digest8_vec(vals)
    for i in (0, 1, 99, 499):
        key = struct.pack("<Q", int(vals[i]))
        assert int(out[i]) == prg.digest(key)


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.IMPL)
def test_digest16_matches_scalar_digest(impl):
    vals = _rng().integers(0, 2**64, size=200, dtype=np.uint64)
    suffix = 4096
    out = impl.digest16_vec(vals, suffix)
    for i in (0, 7, 199):
        key = struct.pack("<QQ", int(vals[i]), suffix)
        assert int(out[i]) == prg.digest(key)


@needs_native
def test_mix_and_gate_agree():
    vals = _rng().integers(0, 2**64, size=4096, dtype=np.uint64)
    assert np.array_equal(py_impl.mix64_vec(vals.copy()), native_impl.mix64_vec(vals.copy()))
    assert np.array_equal(py_impl.gate64_vec(vals.copy()), native_impl.gate64_vec(vals.copy()))


@needs_native
@pytest.mark.parametrize("ring,cap_mult", [(97, 2), (97, 1), (256, 2), (388, 2)])
def test_lookup_bulk_agrees(ring, cap_mult):
    rng = _rng()
    real = min(ring, 200)
    states = (rng.random(real) < 0.5).astype(np.uint8)
    states[rng.integers(0, real)] = 1  # keep at least one working node
    seeds = rng.integers(0, 2**64, size=20_000, dtype=np.uint64)
    cap = cap_mult * ring
    got_p = py_impl.lookup_bulk(seeds, states, ring, cap)
    got_n = native_impl.lookup_bulk(seeds, states, ring, cap)
    for a, b in zip(got_p, got_n):
        assert np.array_equal(a, b)


@needs_native
def test_lookup_bulk_fallback_path_agrees():
    # One working node in a big ring with a tiny cap forces the scan path.
    states = np.zeros(64, dtype=np.uint8)
    states[17] = 1
    seeds = _rng().integers(0, 2**64, size=5_000, dtype=np.uint64)
    got_p = py_impl.lookup_bulk(seeds, states, 64, 4)
    got_n = native_impl.lookup_bulk(seeds, states, 64, 4)
    for a, b in zip(got_p, got_n):
        assert np.array_equal(a, b)
    assert got_p[2].any(), "expected at least one fallback in this setup"
    assert np.all(got_p[0][got_p[2].astype(bool)] == 17)


@needs_native
def test_lookup_weighted_bulk_agrees():
    rng = _rng()
    codes = rng.integers(0, 2**32, size=150, dtype=np.uint32)
    codes[::7] = 0  # some dead nodes
    codes[::11] = 0xFFFFFFFF  # some full-weight nodes (always-accept path)
    seeds = rng.integers(0, 2**64, size=20_000, dtype=np.uint64)
    got_p = py_impl.lookup_weighted_bulk(seeds, codes, 300)
    got_n = native_impl.lookup_weighted_bulk(seeds, codes, 300)
    for a, b in zip(got_p, got_n):
        assert np.array_equal(a, b)


@needs_native
def test_lookup_weighted_fallback_agrees():
    codes = np.zeros(40, dtype=np.uint32)
    codes[5] = 1  # nearly-zero weight: almost every probe is rejected
    seeds = _rng().integers(0, 2**64, size=2_000, dtype=np.uint64)
    got_p = py_impl.lookup_weighted_bulk(seeds, codes, 8)
    got_n = native_impl.lookup_weighted_bulk(seeds, codes, 8)
    for a, b in zip(got_p, got_n):
        assert np.array_equal(a, b)
    assert got_p[2].any()
    assert np.all(got_p[0] == 5)


def test_weighted_full_code_always_accepts():
    # Code 0xFFFFFFFF means weight exactly 1.0: the first probe always wins.
    codes = np.full(32, 0xFFFFFFFF, dtype=np.uint32)
    seeds = _rng().integers(0, 2**64, size=5_000, dtype=np.uint64)
    nodes, taus, fb = kernels.lookup_weighted_bulk(seeds, codes, 64)
    assert np.all(taus == 1)
    assert not fb.any()
    assert np.all(nodes == (kernels.mix64_vec(seeds.copy()) % np.uint64(32)).astype(np.int64))


@needs_native
def test_jump_bulk_agrees():
    seeds = _rng().integers(0, 2**64, size=50_000, dtype=np.uint64)
    for n in (1, 2, 17, 1000):
        assert np.array_equal(py_impl.jump_bulk(seeds, n), native_impl.jump_bulk(seeds, n))


@needs_native
def test_maglev_fill_agrees():
    rng = _rng()
    for n, m in [(1, 13), (7, 101), (50, 997)]:
        offsets = rng.integers(0, m, size=n, dtype=np.uint64)
        skips = rng.integers(1, m, size=n, dtype=np.uint64)
        assert np.array_equal(
            py_impl.maglev_fill(offsets, skips, m),
            native_impl.maglev_fill(offsets, skips, m),
        )


def test_maglev_fill_covers_table():
    offsets = np.array([3], dtype=np.uint64)
    skips = np.array([5], dtype=np.uint64)
    table = kernels.maglev_fill(offsets, skips, 13)
    assert np.all(table == 0)
    assert table.size == 13
