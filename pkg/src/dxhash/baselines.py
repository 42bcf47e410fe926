"""Reference algorithms the experiments compare against.

All three reuse the package digest for their hashing so that cross-algorithm
comparisons measure placement strategy, not hash quality:

* HashRing: classic sorted ring with virtual nodes, 32-bit positions.
* MaglevTable: permutation-filled lookup table, rebuilt on membership change.
* jump_lookup: stateless bucket assignment for a contiguous bucket range.
"""

from __future__ import annotations

import bisect
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as kernels
from . import prg
from .core import InvalidArgumentError, NoWorkingNodeError

RING_SPACE_BITS = 32
_RING_MASK = (1 << RING_SPACE_BITS) - 1

DEFAULT_VNODES = 100
DEFAULT_TABLE_SIZE = 99991  # prime, ~100x a thousand-node cluster


def _ring_position(node: int, vnode: int) -> int:
    return prg.digest(b"ring:%d:%d" % (node, vnode)) & _RING_MASK


def key_hash32(key: bytes | bytearray | memoryview | str) -> int:
    """Ring-space hash of a key."""
    return prg.digest(key) & _RING_MASK


class HashRing:
    """Sorted ring with virtual nodes.

    A key goes to the owner of the first ring position clockwise from (at or
    after) its hash, wrapping at the top of the 32-bit space. Position
    collisions between virtual nodes are resolved to the smallest node id,
    so adding then removing a node always restores the previous map exactly.
    """

    def __init__(self, nodes: Iterable[int] = (), vnodes_per_node: int = DEFAULT_VNODES) -> None:
        if vnodes_per_node < 1:
            raise InvalidArgumentError("vnodes_per_node must be >= 1")
        self.vnodes_per_node = vnodes_per_node
        self._claims: dict[int, list[int]] = {}
        self._nodes: set[int] = set()
        self._positions: np.ndarray | None = None
        self._owners: np.ndarray | None = None
        for node in nodes:
            self.add_node(node)

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def add_node(self, node: int) -> None:
        node = int(node)
        if node in self._nodes:
            raise InvalidArgumentError(f"node {node} already on the ring")
        self._nodes.add(node)
        for v in range(self.vnodes_per_node):
            pos = _ring_position(node, v)
            claims = self._claims.setdefault(pos, [])
            bisect.insort(claims, node)
        self._positions = None

    def remove_node(self, node: int) -> None:
        node = int(node)
        if node not in self._nodes:
            raise InvalidArgumentError(f"node {node} not on the ring")
        self._nodes.remove(node)
        for v in range(self.vnodes_per_node):
            pos = _ring_position(node, v)
            claims = self._claims[pos]
            claims.remove(node)
            if not claims:
                del self._claims[pos]
        self._positions = None

    def _refresh(self) -> tuple[np.ndarray, np.ndarray]:
        if self._positions is None:
            if not self._claims:
                raise NoWorkingNodeError("ring is empty")
            positions = np.array(sorted(self._claims), dtype=np.uint64)
            owners = np.array([self._claims[int(p)][0] for p in positions], dtype=np.int64)
            self._positions = positions
            self._owners = owners
        return self._positions, self._owners  # type: ignore[return-value]

    def position_map(self) -> dict[int, int]:
        """Position -> owning node, after collision resolution."""
        return {pos: claims[0] for pos, claims in self._claims.items()}

    def lookup(self, key: bytes | bytearray | memoryview | str) -> int:
        return int(self.lookup_hashes(np.array([key_hash32(key)], dtype=np.uint64))[0])

    def lookup_hashes(self, hashes32: np.ndarray) -> np.ndarray:
        """Bulk lookup of precomputed ring-space hashes."""
        positions, owners = self._refresh()
        idx = np.searchsorted(positions, hashes32.astype(np.uint64), side="left")
        idx[idx == positions.size] = 0
        return owners[idx]


class MaglevTable:
    """Permutation-table hashing. Immutable once built; rebuild to change.

    Every node fills the table in round-robin through its own permutation of
    the table slots (offset plus multiples of skip, modulo the table size),
    so entries split near-evenly. The table size should be a prime well
    above the node count.
    """

    def __init__(self, nodes: Sequence[int], table_size: int = DEFAULT_TABLE_SIZE) -> None:
        nodes = [int(n) for n in nodes]
        if not nodes:
            raise InvalidArgumentError("need at least one node")
        if len(set(nodes)) != len(nodes):
            raise InvalidArgumentError("duplicate node ids")
        if table_size < len(nodes):
            raise InvalidArgumentError("table size below node count")
        self.table_size = int(table_size)
        self.nodes = np.array(nodes, dtype=np.int64)
        offsets = np.array(
            [prg.digest(b"maglev:%d:offset" % n) % table_size for n in nodes],
            dtype=np.int64,
        )
        skips = np.array(
            [prg.digest(b"maglev:%d:skip" % n) % (table_size - 1) + 1 for n in nodes],
            dtype=np.int64,
        )
        self._table = self.nodes[kernels.maglev_fill(offsets, skips, table_size)]

    @property
    def table(self) -> np.ndarray:
        """The filled lookup table (read-only view, one node id per entry)."""
        view = self._table.view()
        view.flags.writeable = False
        return view

    def entry_counts(self) -> dict[int, int]:
        ids, counts = np.unique(self._table, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}

    def lookup(self, key: bytes | bytearray | memoryview | str) -> int:
        return int(self._table[prg.digest(key) % self.table_size])

    def lookup_digests(self, digests: np.ndarray) -> np.ndarray:
        """Bulk lookup of predigested keys."""
        return self._table[digests.astype(np.uint64) % np.uint64(self.table_size)]


def jump_lookup(key: int | bytes | bytearray | memoryview | str, buckets: int) -> int:
    """Jump bucket assignment: key -> bucket in [0, buckets).

    Growing the bucket count moves a key only if its bucket becomes one of
    the new ones. Buckets cannot be removed from the middle, which is the
    trade-off for needing no state at all.
    """
    if buckets < 1:
        raise InvalidArgumentError("buckets must be >= 1")
    k = key if isinstance(key, int) else prg.digest(key)
    k &= prg.MASK64
    b, j = -1, 0
    while j < buckets:
        b = j
        k = (k * 2862933555777941757 + 1) & prg.MASK64
        j = ((b + 1) << 31) // ((k >> 33) + 1)
    return b


def jump_many(keys: np.ndarray, buckets: int) -> np.ndarray:
    """Bulk jump_lookup over predigested 64-bit keys."""
    if buckets < 1:
        raise InvalidArgumentError("buckets must be >= 1")
    return kernels.jump_bulk(keys, buckets)
