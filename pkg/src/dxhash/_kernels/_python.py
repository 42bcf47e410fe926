"""Pure numpy bulk kernels.

Fallback implementation used when the compiled extension is unavailable (or
when DXHASH_PURE=1). Must stay bit-identical to ``_native.pyx`` and to the
scalar reference functions in ``dxhash.prg``; the kernel equivalence tests
enforce that.

The lookup kernels run in "waves": one sequence step for every unresolved
key at a time, so the total work is proportional to the number of probes
actually taken rather than keys times the iteration cap.
"""

from __future__ import annotations

import numpy as np

from .. import prg

IMPL = "python"

_U64 = np.uint64
_SEQ_M1 = _U64(prg._SEQ_M1)
_SEQ_M2 = _U64(prg._SEQ_M2)
_GATE_M1 = _U64(prg._GATE_M1)
_GATE_M2 = _U64(prg._GATE_M2)

# Digest state after absorbing the length of an 8- or 16-byte key.
_LEN8_STATE = _U64(prg.next_seed(prg.DIGEST_SEED ^ 8))
_LEN16_STATE = _U64(prg.next_seed(prg.DIGEST_SEED ^ 16))

_JUMP_LCG = _U64(2862933555777941757)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """Vector form of prg.next_seed."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U64(30)
    z *= _SEQ_M1
    z ^= z >> _U64(27)
    z *= _SEQ_M2
    z ^= z >> _U64(31)
    return z


def gate64_vec(z: np.ndarray) -> np.ndarray:
    """Vector form of prg.gate_u64."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _U64(33)
    z *= _GATE_M1
    z ^= z >> _U64(33)
    z *= _GATE_M2
    z ^= z >> _U64(33)
    return z


def digest8_vec(vals: np.ndarray) -> np.ndarray:
    """Digest of the 8-byte little-endian encoding of each value."""
    return mix64_vec(vals.astype(np.uint64) ^ _LEN8_STATE)


def digest16_vec(vals: np.ndarray, suffix: int) -> np.ndarray:
    """Digest of each value followed by a fixed 8-byte suffix (both LE)."""
    h = mix64_vec(vals.astype(np.uint64) ^ _LEN16_STATE)
    h ^= _U64(suffix)
    return mix64_vec(h)


def lookup_bulk(
    seeds: np.ndarray, states: np.ndarray, ring: int, cap: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Resolve each seed over a ring of `ring` slots.

    `states` holds one byte per real slot (nonzero = working); indices at or
    beyond len(states) count as failed, which is how virtual rings larger
    than the real cluster are modelled. Returns (nodes, search_lengths,
    fallback_flags). The caller must guarantee at least one working slot
    below `ring`.
    """
    seeds = np.array(seeds, dtype=np.uint64, copy=True)
    n = seeds.size
    a = states.size
    nodes = np.full(n, -1, dtype=np.int64)
    taus = np.zeros(n, dtype=np.int64)
    fallback = np.zeros(n, dtype=np.uint8)
    active = np.arange(n)
    ring_u = _U64(ring)
    for it in range(1, cap + 1):
        if active.size == 0:
            break
        s = mix64_vec(seeds[active])
        seeds[active] = s
        b = (s % ring_u).astype(np.int64)
        hit = b < a
        hit[hit] = states[b[hit]] != 0
        resolved = active[hit]
        nodes[resolved] = b[hit]
        taus[resolved] = it
        active = active[~hit]
    for i in active:
        # Deterministic scan, ascending from the last sequence item's index.
        start = int(seeds[i]) % ring
        for off in range(ring):
            c = start + off
            if c >= ring:
                c -= ring
            if c < a and states[c]:
                nodes[i] = c
                break
        taus[i] = cap
        fallback[i] = 1
    return nodes, taus, fallback


def lookup_weighted_bulk(
    seeds: np.ndarray, codes: np.ndarray, cap: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Weight-gated lookup over a ring of len(codes) slots.

    `codes` holds one 32-bit fixed-point weight code per slot (see
    ``dxhash.weighted``). A slot accepts a key when the top 32 bits of the
    gate hash fall below its threshold; code 0xFFFFFFFF means weight exactly
    1 and its threshold is 2**32, so it accepts unconditionally. The caller
    must guarantee at least one nonzero code.
    """
    seeds = np.array(seeds, dtype=np.uint64, copy=True)
    n = seeds.size
    a = codes.size
    thresholds = codes.astype(np.uint64) + (codes == np.uint32(0xFFFFFFFF))
    nodes = np.full(n, -1, dtype=np.int64)
    taus = np.zeros(n, dtype=np.int64)
    fallback = np.zeros(n, dtype=np.uint8)
    active = np.arange(n)
    a_u = _U64(a)
    for it in range(1, cap + 1):
        if active.size == 0:
            break
        s = mix64_vec(seeds[active])
        seeds[active] = s
        b = (s % a_u).astype(np.int64)
        hit = (gate64_vec(s) >> _U64(32)) < thresholds[b]
        resolved = active[hit]
        nodes[resolved] = b[hit]
        taus[resolved] = it
        active = active[~hit]
    for i in active:
        start = int(seeds[i]) % a
        for off in range(a):
            c = start + off
            if c >= a:
                c -= a
            if codes[c]:
                nodes[i] = c
                break
        taus[i] = cap
        fallback[i] = 1
    return nodes, taus, fallback


def maglev_fill(offsets: np.ndarray, skips: np.ndarray, m: int) -> np.ndarray:
    """Fill a permutation lookup table of size m over len(offsets) nodes."""
    n = offsets.size
    offsets = offsets.astype(np.int64)
    skips = skips.astype(np.int64)
    table = np.full(m, -1, dtype=np.int64)
    next_j = np.zeros(n, dtype=np.int64)
    filled = 0
    while True:
        for node in range(n):
            j = int(next_j[node])
            c = (int(offsets[node]) + j * int(skips[node])) % m
            while table[c] >= 0:
                j += 1
                c = (int(offsets[node]) + j * int(skips[node])) % m
            table[c] = node
            next_j[node] = j + 1
            filled += 1
            if filled == m:
                return table


def jump_bulk(keys: np.ndarray, n: int) -> np.ndarray:
    """Jump bucket assignment for each 64-bit key, over n buckets."""
    k = keys.astype(np.uint64, copy=True)
    size = k.size
    b = np.full(size, -1, dtype=np.int64)
    j = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    one = _U64(1)
    while active.size:
        b[active] = j[active]
        ka = k[active] * _JUMP_LCG + one
        k[active] = ka
        num = (b[active] + 1).astype(np.uint64) << _U64(31)
        j[active] = (num // ((ka >> _U64(33)) + one)).astype(np.int64)
        active = active[j[active] < n]
    return b
