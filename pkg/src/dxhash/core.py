"""Consistent hashing over a cluster state array.

A cluster is an array of slots, each working or failed, plus a FIFO queue of
the failed slot ids. A key lookup walks the key's pseudo-random sequence,
reducing each item to a slot index, and stops at the first working slot.
Membership changes flip exactly one slot, which is why only the keys whose
walk passes through that slot can change owners.

State is kept as one byte per slot (the lookup hot path); snapshots pack it
to one bit per slot. The two representations are interchangeable and the
suite checks they agree.

Concurrency: lookups are read-only and may run concurrently with each other.
Mutations (add/remove/scale/load) require exclusive access relative to both
lookups and other mutations; callers provide that exclusion.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels as kernels
from . import prg

SNAPSHOT_MAGIC = b"DXH1"
_HEADER_LEN = len(SNAPSHOT_MAGIC) + 8


class DxHashError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(DxHashError, ValueError):
    pass


class NoWorkingNodeError(DxHashError):
    """Raised when a lookup runs against a cluster with no working node."""


class ClusterFullError(DxHashError):
    """Raised when add_node is called and no slot is failed."""


class AlreadyFailedError(DxHashError):
    """Raised when remove_node targets a node that is already failed."""


class CapacityError(DxHashError):
    """Raised when scale_down cannot fit the working nodes in half the slots."""


class LookupOutcome(NamedTuple):
    node: int
    search_length: int
    fallback: bool = False


class DxHash:
    """Cluster state plus the lookup, membership and scaling operations."""

    def __init__(self, states: Iterable[bool]) -> None:
        arr = np.asarray(list(states) if not isinstance(states, np.ndarray) else states)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidArgumentError("states must be a non-empty 1-d sequence")
        self._states = np.ascontiguousarray(arr != 0, dtype=np.uint8)
        self._failed: deque[int] = deque(int(i) for i in np.flatnonzero(self._states == 0))
        self._working = int(self._states.sum())

    @classmethod
    def all_working(cls, size: int) -> "DxHash":
        if size < 1:
            raise InvalidArgumentError("size must be >= 1")
        return cls(np.ones(size, dtype=np.uint8))

    # -- introspection -----------------------------------------------------

    @property
    def size(self) -> int:
        return int(self._states.size)

    @property
    def working_count(self) -> int:
        return self._working

    @property
    def failed_count(self) -> int:
        return self.size - self._working

    def stats(self) -> tuple[int, int, int]:
        """(total slots, working count, failed count)."""
        return (self.size, self._working, self.size - self._working)

    def is_working(self, node: int) -> bool:
        self._check_node(node)
        return bool(self._states[node])

    def failed_queue(self) -> tuple[int, ...]:
        """Current FIFO order of the failed slot ids (head first)."""
        return tuple(self._failed)

    def states_array(self) -> np.ndarray:
        """Copy of the byte-per-slot representation (1 = working)."""
        return self._states.copy()

    def packed_states(self) -> bytes:
        """Bit-per-slot representation, LSB-first within each byte."""
        return np.packbits(self._states, bitorder="little").tobytes()

    # -- membership --------------------------------------------------------

    def add_node(self) -> int:
        """Revive the failed slot that has been failed the longest."""
        if not self._failed:
            raise ClusterFullError("no failed slot available")
        node = self._failed.popleft()
        self._states[node] = 1
        self._working += 1
        return node

    def add_node_auto(self) -> int:
        """add_node, scaling up first if every slot is already working."""
        try:
            return self.add_node()
        except ClusterFullError:
            self.scale_up()
            return self.add_node()

    def remove_node(self, node: int) -> None:
        self._check_node(node)
        if not self._states[node]:
            raise AlreadyFailedError(f"node {node} is already failed")
        self._states[node] = 0
        self._failed.append(int(node))
        self._working -= 1

    def _check_node(self, node: int) -> None:
        if not 0 <= int(node) < self.size:
            raise InvalidArgumentError(f"node id {node} out of range [0, {self.size})")

    # -- lookups -----------------------------------------------------------

    def get_node(self, key: bytes | bytearray | memoryview | str) -> LookupOutcome:
        """Resolve a key to a working slot.

        search_length is the number of sequence steps taken. It is at most
        2 * size unless the outcome is flagged as a fallback, in which case
        the walk was cut off and the slot came from a deterministic scan.
        """
        return self.lookup_seed(prg.digest(key))

    def lookup_seed(self, seed: int, ring_size: int | None = None) -> LookupOutcome:
        """Resolve an already-digested seed.

        ring_size widens (or narrows) the index space without changing the
        real cluster: indices at or beyond the real size count as failed.
        Replica placement runs on such virtual rings.
        """
        ring = self.size if ring_size is None else int(ring_size)
        self._require_working(ring)
        a = self.size
        states = self._states
        cap = 2 * ring
        s = seed & prg.MASK64
        for i in range(1, cap + 1):
            s = prg.next_seed(s)
            b = (s & prg.MASK64) % ring
            if b < a and states[b]:
                return LookupOutcome(int(b), i, False)
        start = s % ring
        for off in range(ring):
            b = start + off
            if b >= ring:
                b -= ring
            if b < a and states[b]:
                return LookupOutcome(int(b), cap, True)
        raise NoWorkingNodeError("no working node below ring size")  # pragma: no cover

    def lookup_many(
        self, seeds: np.ndarray, ring_size: int | None = None
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bulk lookup_seed. Returns (nodes, search_lengths, fallback_flags)."""
        ring = self.size if ring_size is None else int(ring_size)
        self._require_working(ring)
        return kernels.lookup_bulk(seeds, self._states, ring, 2 * ring)

    def _require_working(self, ring: int) -> None:
        if ring < 1:
            raise InvalidArgumentError("ring size must be >= 1")
        if ring >= self.size:
            if self._working == 0:
                raise NoWorkingNodeError("cluster has no working node")
        elif not np.any(self._states[:ring]):
            raise NoWorkingNodeError("no working node below ring size")

    # -- scaling -----------------------------------------------------------

    def scale_up(self) -> None:
        """Double the slot space; the new upper half starts failed."""
        old = self.size
        self._states = np.concatenate([self._states, np.zeros(old, dtype=np.uint8)])
        self._failed.extend(range(old, 2 * old))

    def scale_down(self) -> None:
        """Halve the slot space.

        Working nodes in the upper half are removed, the slot space is cut
        in half, failed ids that no longer exist are purged, and the same
        number of nodes as was removed is added back from the freed lower
        slots (FIFO). Raises CapacityError (before any mutation) if the
        working nodes cannot fit in half the slots.
        """
        a = self.size
        if a < 2:
            raise InvalidArgumentError("cannot scale down a single-slot cluster")
        new_a = a // 2
        if self._working > new_a:
            raise CapacityError(
                f"{self._working} working nodes cannot fit in {new_a} slots"
            )
        moved = [i for i in range(new_a, a) if self._states[i]]
        for node in moved:
            self.remove_node(node)
        self._states = self._states[:new_a].copy()
        self._failed = deque(i for i in self._failed if i < new_a)
        for _ in moved:
            self.add_node()

    def should_scale_down(self, threshold: float = 0.25) -> bool:
        """Advisory check: is the working share below the threshold?

        Never called automatically; shrinking moves data, so the caller
        decides when to act on it.
        """
        if not 0.0 < threshold <= 1.0:
            raise InvalidArgumentError("threshold must be in (0, 1]")
        return self.size >= 2 and self._working < self.size * threshold

    # -- snapshots ----------------------------------------------------------

    def to_snapshot(self) -> bytes:
        """Serialize: magic, u64 LE slot count, bit-packed states."""
        return (
            SNAPSHOT_MAGIC
            + self.size.to_bytes(8, "little")
            + self.packed_states()
        )

    @classmethod
    def from_snapshot(cls, data: bytes) -> "DxHash":
        if len(data) < _HEADER_LEN or data[:4] != SNAPSHOT_MAGIC:
            raise InvalidArgumentError("bad snapshot header")
        size = int.from_bytes(data[4:12], "little")
        payload = data[_HEADER_LEN:]
        expected = (size + 7) // 8
        if size < 1 or len(payload) != expected:
            raise InvalidArgumentError("snapshot payload length mismatch")
        bits = np.unpackbits(
            np.frombuffer(payload, dtype=np.uint8), count=size, bitorder="little"
        )
        return cls(bits)
