"""Seed digesting and pseudo-random sequence primitives.

Every function here is pure and operates on unsigned 64-bit integers,
represented as Python ints in [0, 2**64). The bulk kernels in
``dxhash._kernels`` mirror these definitions bit for bit (both the compiled
and the pure numpy implementation), and the test suite keeps all three in
lockstep, so a key always walks the same sequence no matter which path
resolved it.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1

# Sequence step: Stafford's variant-13 avalanche finalizer. It is a bijection
# on 64 bits, so iterating it walks a single huge permutation cycle and
# cannot revisit a seed within any realistic lookup.
_SEQ_M1 = 0xBF58476D1CE4E5B9
_SEQ_M2 = 0x94D049BB133111EB

# Gate hash: the 64-bit finalizer from MurmurHash3. Different constants and
# shift schedule than the sequence step, so gate decisions made at each stop
# of the walk stay decorrelated from the walk itself.
_GATE_M1 = 0xFF51AFD7ED558CCD
_GATE_M2 = 0xC4CEB9FE1A85EC53

DIGEST_SEED = 0x9E3779B97F4A7C15


def next_seed(s: int) -> int:
    """Advance the pseudo-random sequence by one step (bijective mix)."""
    s &= MASK64
    s ^= s >> 30
    s = (s * _SEQ_M1) & MASK64
    s ^= s >> 27
    s = (s * _SEQ_M2) & MASK64
    return s ^ (s >> 31)


def gate_u64(s: int) -> int:
    """Gate hash of a sequence item, as a full 64-bit value.

    The top 32 bits are what weighted lookups compare against fixed-point
    weights; see ``dxhash.weighted``.
    """
    s &= MASK64
    s ^= s >> 33
    s = (s * _GATE_M1) & MASK64
    s ^= s >> 33
    s = (s * _GATE_M2) & MASK64
    return s ^ (s >> 33)


def unit_hash(s: int) -> float:
    """Gate hash of a sequence item mapped to [0, 1)."""
    return to_unit(gate_u64(s))


def digest(key: bytes | bytearray | memoryview | str) -> int:
    """Collapse an arbitrary byte key into a 64-bit seed.

    The key is absorbed in 8-byte little-endian chunks (the final partial
    chunk zero-padded) into a state that already encodes the key length, so
    keys that are prefixes of one another digest independently. str input is
    a convenience and is hashed as its UTF-8 encoding.
    """
    if isinstance(key, str):
        data = key.encode("utf-8")
    else:
        data = bytes(key)
    n = len(data)
    h = next_seed(DIGEST_SEED ^ n)
    full = n & ~7
    for i in range(0, full, 8):
        h = next_seed(h ^ int.from_bytes(data[i : i + 8], "little"))
    if full != n:
        h = next_seed(h ^ int.from_bytes(data[full:], "little"))
    return h


def to_index(s: int, a: int) -> int:
    """Reduce a seed to a slot index in [0, a).

    Plain 64-bit remainder. Two properties matter:

    * Bias: slots receive either floor(2**64 / a) or ceil(2**64 / a)
      preimages, a relative deviation of at most a / 2**64 (< 2**-32 for any
      a <= 2**32). For a a power of two the mapping is exactly uniform.
    * Doubling congruence: to_index(s, 2 * a) % a == to_index(s, a). The
      scale-up path relies on this, it is what lets half of all keys keep
      their slot when the slot space doubles. A multiply-shift reduction
      would have the same bias bound but not this property.
    """
    if a < 1:
        raise ValueError("slot count must be >= 1")
    return (s & MASK64) % a


def to_unit(s: int) -> float:
    """Map a seed to [0, 1) using its top 53 bits."""
    return ((s & MASK64) >> 11) * 2.0**-53
