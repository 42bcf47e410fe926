"""Consistent hashing on pseudo-random sequences.

Public surface:

* ``DxHash``: the cluster (slot states, lookup, membership, scaling).
* ``WeightedDxHash``: fractional per-slot weights.
* ``ReplicaSpec`` / ``place_replicas`` / ``rotate_on_scaleup``: three-copy
  placement that survives cluster doubling with bounded movement.
* ``baselines``: HashRing, MaglevTable, jump_lookup for comparison.
* ``experiments``: the ``bench`` command line and its runners.
"""

from .baselines import HashRing, MaglevTable, jump_lookup
from .core import (
    AlreadyFailedError,
    CapacityError,
    ClusterFullError,
    DxHash,
    DxHashError,
    InvalidArgumentError,
    LookupOutcome,
    NoWorkingNodeError,
)
from .replica import (
    ReplicaPlacement,
    ReplicaSpec,
    place_replicas,
    replica_keys,
    rotate_on_scaleup,
)
from .weighted import WeightedDxHash

__version__ = "0.1.0"

__all__ = [
    "AlreadyFailedError",
    "CapacityError",
    "ClusterFullError",
    "DxHash",
    "DxHashError",
    "HashRing",
    "InvalidArgumentError",
    "LookupOutcome",
    "MaglevTable",
    "NoWorkingNodeError",
    "ReplicaPlacement",
    "ReplicaSpec",
    "WeightedDxHash",
    "jump_lookup",
    "place_replicas",
    "replica_keys",
    "rotate_on_scaleup",
    "__version__",
]
