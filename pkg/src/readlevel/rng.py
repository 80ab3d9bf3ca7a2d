"""Deterministic RNG stream derivation.

Every unit of work (tree, one-vs-rest class, experiment cell) gets its own
generator derived from (seed, *key), so execution order and thread count
never change results. String key parts are folded through sha256 because
Python's builtin hash is salted per process.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_ints(parts: tuple) -> list[int]:
    out = []
    for part in parts:
        if isinstance(part, (int, np.integer)) and int(part) >= 0:
            out.append(int(part))
        else:
            digest = hashlib.sha256(repr(part).encode("utf-8")).digest()
            out.append(int.from_bytes(digest[:8], "little"))
    return out


def derive_seed(seed: int, *key) -> int:
    """Stable child seed for (seed, *key); independent of call order."""
    ss = np.random.SeedSequence(_key_ints((seed, *key)))
    return int(ss.generate_state(1, np.uint64)[0])


def derived_rng(seed: int, *key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_key_ints((seed, *key))))
