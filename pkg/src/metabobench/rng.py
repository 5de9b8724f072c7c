"""Deterministic seed derivation.

Every stochastic choice in a run is driven by a stream derived from the
master seed and a tag path (e.g. fold index, grid index). Derivation is a
hash of the tags, so results do not depend on evaluation order or thread
scheduling: any worker that knows its tags reproduces its stream.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, *tags: int | str) -> int:
    """Map (master seed, tag path) to a 64-bit unsigned seed."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode("ascii"))
    for tag in tags:
        h.update(b"\x1f")
        h.update(str(tag).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


def derive_rng(master: int, *tags: int | str) -> np.random.Generator:
    """A fresh PCG64 generator seeded by ``derive_seed(master, *tags)``."""
    return np.random.default_rng(derive_seed(master, *tags))
