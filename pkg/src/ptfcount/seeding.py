"""Counter-based seed derivation.

Every random choice in the package is drawn from a generator seeded with
``derive(parent, label, ...)``, so any component can be reproduced in
isolation from the master seed and its label path.
"""
from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive(parent: int, *labels) -> int:
    """64-bit child seed: blake2b-8 of the parent and the labels' reprs."""
    h = hashlib.blake2b(digest_size=8)
    h.update((parent & MASK64).to_bytes(8, "little"))
    for label in labels:
        h.update(b"\x1f")
        h.update(repr(label).encode())
    return int.from_bytes(h.digest(), "little")


def rng(seed: int, *labels) -> np.random.Generator:
    return np.random.default_rng(derive(seed, *labels) if labels else seed & MASK64)
