"""Shared fixtures: expensive sample streams built once per session."""

import numpy as np
import pytest

from dxhash import prg
from dxhash import _kernels as kernels


@pytest.fixture(scope="session")
def prs_walk():
    """One million consecutive PRS items from a single fixed seed."""
    out = np.empty(1_000_000, dtype=np.uint64)
    s = prg.digest(b"walk-fixture")
    for i in range(out.size):
        s = prg.next_seed(s)
        out[i] = s
    return out


@pytest.fixture(scope="session")
def key_seeds_1m():
    """Digests of one million distinct u64 keys (bulk kernel path)."""
    vals = np.arange(1_000_000, dtype=np.uint64)
    return kernels.digest8_vec(vals)


def make_key_seeds(n, *, tag=0):
    """Digest-of-counter key stream, offset by a tag so streams differ."""
    base = np.uint64(prg.next_seed(0xD1CE ^ tag))
    vals = base + np.arange(n, dtype=np.uint64)
    return kernels.digest8_vec(vals)
