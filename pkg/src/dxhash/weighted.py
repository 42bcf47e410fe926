"""Weight-gated variant: every slot carries a weight in [0, 1].

A lookup walks the key's sequence exactly as in the unweighted cluster, but
a slot only accepts the key when the gate hash of the current sequence item
falls below the slot's weight. Weight 0 therefore behaves exactly like a
failed slot and weight 1 exactly like an unconditionally working one, which
is what reduces this variant to ``dxhash.core`` when all weights are 0 or 1.

Weights are stored as 32-bit fixed-point codes (denominator 2**32) and the
gate comparison is pure integer arithmetic, so results are identical across
platforms and across the compiled and pure kernels. Code 0xFFFFFFFF is
reserved to mean exactly 1.0 (threshold 2**32); as a consequence, weights
within 2**-32 of 1 quantize to exactly 1. Each iteration evaluates two
hashes (sequence step and gate), so the expected hash cost of a lookup is
2 * size / sum(weights).

Concurrency follows core: concurrent lookups, exclusive mutations.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable

import numpy as np

from . import _kernels as kernels
from . import prg
from .core import (
    AlreadyFailedError,
    ClusterFullError,
    InvalidArgumentError,
    LookupOutcome,
    NoWorkingNodeError,
)

SNAPSHOT_MAGIC = b"DXW1"
_HEADER_LEN = len(SNAPSHOT_MAGIC) + 8

CODE_ONE = 0xFFFFFFFF


def quantize_weight(weight: float) -> int:
    """Map a float weight in [0, 1] to its stored 32-bit code."""
    try:
        w = float(weight)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"weight {weight!r} is not a number") from exc
    if math.isnan(w) or not 0.0 <= w <= 1.0:
        raise InvalidArgumentError(f"weight {weight!r} outside [0, 1]")
    code = round(w * 2.0**32)
    return CODE_ONE if code >= CODE_ONE else code


def code_to_weight(code: int) -> float:
    """Inverse of quantize_weight, exact for every stored code."""
    return 1.0 if code == CODE_ONE else code / 2.0**32


def _threshold(code: int) -> int:
    # Acceptance threshold against the top 32 bits of the gate hash.
    return (1 << 32) if code == CODE_ONE else code


class WeightedDxHash:
    """Cluster whose slots have fractional weights instead of binary states."""

    def __init__(self, weights: Iterable[float]) -> None:
        codes = [quantize_weight(w) for w in weights]
        if not codes:
            raise InvalidArgumentError("weights must be non-empty")
        self._codes = np.asarray(codes, dtype=np.uint32)
        self._failed: deque[int] = deque(int(i) for i in np.flatnonzero(self._codes == 0))
        self._nonzero = int(np.count_nonzero(self._codes))

    # -- introspection -----------------------------------------------------

    @property
    def size(self) -> int:
        return int(self._codes.size)

    @property
    def working_count(self) -> int:
        """Slots with nonzero weight (working for membership purposes)."""
        return self._nonzero

    def stats(self) -> tuple[int, int, int]:
        return (self.size, self._nonzero, self.size - self._nonzero)

    def weight(self, node: int) -> float:
        self._check_node(node)
        return code_to_weight(int(self._codes[node]))

    def weights_array(self) -> np.ndarray:
        """Copy of the weights decoded to floats."""
        return np.array([code_to_weight(int(c)) for c in self._codes])

    def codes_array(self) -> np.ndarray:
        """Copy of the stored 32-bit weight codes."""
        return self._codes.copy()

    def failed_queue(self) -> tuple[int, ...]:
        return tuple(self._failed)

    def total_weight(self) -> float:
        """Sum of decoded weights."""
        return float(sum(code_to_weight(int(c)) for c in self._codes))

    # -- mutation ----------------------------------------------------------

    def set_weight(self, node: int, weight: float) -> None:
        """Set one slot's weight, keeping the failed queue in sync."""
        self._check_node(node)
        node = int(node)
        new = quantize_weight(weight)
        old = int(self._codes[node])
        if old == 0 and new != 0:
            self._failed.remove(node)
            self._nonzero += 1
        elif old != 0 and new == 0:
            self._failed.append(node)
            self._nonzero -= 1
        self._codes[node] = new

    def remove_node(self, node: int) -> None:
        """Weight the slot to zero (error if it already is)."""
        self._check_node(node)
        if self._codes[node] == 0:
            raise AlreadyFailedError(f"node {node} is already at weight 0")
        self.set_weight(node, 0.0)

    def add_node(self, weight: float = 1.0) -> int:
        """Revive the longest-failed slot at the given weight."""
        if quantize_weight(weight) == 0:
            raise InvalidArgumentError("added node needs a nonzero weight")
        if not self._failed:
            raise ClusterFullError("no zero-weight slot available")
        node = self._failed[0]
        self.set_weight(node, weight)
        return node

    def _check_node(self, node: int) -> None:
        if not 0 <= int(node) < self.size:
            raise InvalidArgumentError(f"node id {node} out of range [0, {self.size})")

    # -- lookups -----------------------------------------------------------

    def get_node(self, key: bytes | bytearray | memoryview | str) -> LookupOutcome:
        return self.lookup_seed(prg.digest(key))

    def lookup_seed(self, seed: int) -> LookupOutcome:
        if self._nonzero == 0:
            raise NoWorkingNodeError("every slot has weight 0")
        a = self.size
        codes = self._codes
        cap = 2 * a
        s = seed & prg.MASK64
        for i in range(1, cap + 1):
            s = prg.next_seed(s)
            b = s % a
            if (prg.gate_u64(s) >> 32) < _threshold(int(codes[b])):
                return LookupOutcome(int(b), i, False)
        start = s % a
        for off in range(a):
            b = start + off
            if b >= a:
                b -= a
            if codes[b]:
                return LookupOutcome(int(b), cap, True)
        raise NoWorkingNodeError("every slot has weight 0")  # pragma: no cover

    def lookup_many(self, seeds: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Bulk lookup_seed. Returns (nodes, search_lengths, fallback_flags)."""
        if self._nonzero == 0:
            raise NoWorkingNodeError("every slot has weight 0")
        return kernels.lookup_weighted_bulk(seeds, self._codes, 2 * self.size)

    # -- snapshots ----------------------------------------------------------

    def to_snapshot(self) -> bytes:
        """Serialize: magic, u64 LE slot count, u32 LE weight code per slot."""
        return (
            SNAPSHOT_MAGIC
            + self.size.to_bytes(8, "little")
            + self._codes.astype("<u4").tobytes()
        )

    @classmethod
    def from_snapshot(cls, data: bytes) -> "WeightedDxHash":
        if len(data) < _HEADER_LEN or data[:4] != SNAPSHOT_MAGIC:
            raise InvalidArgumentError("bad snapshot header")
        size = int.from_bytes(data[4:12], "little")
        payload = data[_HEADER_LEN:]
        if size < 1 or len(payload) != 4 * size:
            raise InvalidArgumentError("snapshot payload length mismatch")
        inst = cls.__new__(cls)
        inst._codes = np.frombuffer(payload, dtype="<u4").astype(np.uint32)
        inst._failed = deque(int(i) for i in np.flatnonzero(inst._codes == 0))
        inst._nonzero = int(np.count_nonzero(inst._codes))
        return inst
