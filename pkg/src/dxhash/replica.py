"""Three-copy placement over nested virtual rings.

Each key keeps three replicas, resolved over virtual rings of 1x, 2x and 4x
the base cluster size (indices beyond the real cluster count as failed). The
replica keys are the raw key with an 8-byte little-endian ring-size suffix
appended before digesting, so the three walks are mutually independent.

When the cluster doubles, the roles rotate instead of everything moving:
rank 2 becomes rank 1 and rank 3 becomes rank 2 (identical suffixed lookups
over identical effective rings, so those copies stay put node for node),
while the old rank-1 copy is demoted to rank 3 and resolved over the
now-8x-the-original ring. The demoted copy keeps the key suffix it was
stored under; only its ring grows. Since its old slot index survives the
modulus-doubling (see prg.to_index), the first step of its walk lands on the
very same slot 1/8 of the time, which caps a doubling's total movement near
7/24 of all placements instead of 1/3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from . import prg
from .core import DxHash, InvalidArgumentError

RING_MULTIPLIERS = (1, 2, 4)


def _suffix_bytes(value: int) -> bytes:
    return int(value).to_bytes(8, "little")


@dataclass(frozen=True)
class ReplicaSpec:
    """Replica layout: base ring size plus the per-rank key suffixes."""

    base_size: int
    suffixes: tuple[int, int, int]

    def __post_init__(self) -> None:
        if self.base_size < 1:
            raise InvalidArgumentError("base_size must be >= 1")
        if len(self.suffixes) != 3 or len(set(self.suffixes)) != 3:
            raise InvalidArgumentError("need three distinct suffixes")

    @classmethod
    def for_cluster(cls, base_size: int) -> "ReplicaSpec":
        """Fresh layout: each rank is suffixed by its own ring size."""
        return cls(base_size, (base_size, 2 * base_size, 4 * base_size))

    @property
    def ring_sizes(self) -> tuple[int, int, int]:
        return (self.base_size, 2 * self.base_size, 4 * self.base_size)


@dataclass(frozen=True)
class ReplicaPlacement:
    nodes: tuple[int, int, int]
    search_lengths: tuple[int, int, int]


def replica_keys(key: bytes | bytearray | memoryview | str, spec: ReplicaSpec) -> tuple[int, int, int]:
    """The three suffixed-key seeds for a key under a layout."""
    if isinstance(key, str):
        key = key.encode("utf-8")
    data = bytes(key)
    return tuple(prg.digest(data + _suffix_bytes(sfx)) for sfx in spec.suffixes)  # type: ignore[return-value]


def place_replicas(
    key: bytes | bytearray | memoryview | str, cluster: DxHash, spec: ReplicaSpec
) -> ReplicaPlacement:
    """Resolve all three replicas of a key on a cluster."""
    seeds = replica_keys(key, spec)
    outcomes = [
        cluster.lookup_seed(seed, ring_size=mult * spec.base_size)
        for seed, mult in zip(seeds, RING_MULTIPLIERS)
    ]
    return ReplicaPlacement(
        nodes=tuple(o.node for o in outcomes),  # type: ignore[arg-type]
        search_lengths=tuple(o.search_length for o in outcomes),  # type: ignore[arg-type]
    )


def replica_seeds_bulk(vals: np.ndarray, spec: ReplicaSpec) -> list[np.ndarray]:
    """Bulk replica_keys for keys that are 8-byte LE encoded counters."""
    return [kernels.digest16_vec(vals, sfx) for sfx in spec.suffixes]


def place_replicas_bulk(
    vals: np.ndarray, cluster: DxHash, spec: ReplicaSpec
) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Bulk place_replicas over counter keys; one (nodes, taus, fallback) per rank."""
    return [
        cluster.lookup_many(seeds, ring_size=mult * spec.base_size)
        for seeds, mult in zip(replica_seeds_bulk(vals, spec), RING_MULTIPLIERS)
    ]


def rotate_on_scaleup(spec: ReplicaSpec) -> ReplicaSpec:
    """The layout that applies after the cluster doubles.

    Ranks 2 and 3 are promoted (keeping their suffixes, now matching the 1x
    and 2x rings of the doubled base), and the old rank-1 suffix is demoted
    to rank 3, where it resolves over 8x the original base size.
    """
    s1, s2, s3 = spec.suffixes
    return ReplicaSpec(2 * spec.base_size, (s2, s3, s1))
