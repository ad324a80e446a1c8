"""Seeded, splittable random number generation.

Every random stream in the workbench comes from numpy's Philox4x64-10
counter-based bit generator keyed through a SeedSequence. A stream is named by
(seed, *keys): keys are ints (replicate index) or strings (command, process
kind), strings being mapped to ints with CRC-32. Distinct key paths give
independent streams, so replicates can run in any order or in parallel without
coupling, and one top-level seed reproduces everything.

Modules accept seeds and build their own Generator from them; nothing reads
global random state.
"""

import zlib

import numpy as np

ALGORITHM = "Philox4x64-10"

SeedKey = int | str


def _key_int(key: SeedKey) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    if key < 0:
        raise ValueError(f"Seed keys must be non-negative, got {key}")
    return key


def seed_sequence(seed: int, *keys: SeedKey) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=tuple(_key_int(k) for k in keys))


def make_rng(seed: int, *keys: SeedKey) -> np.random.Generator:
    """Generator for the stream named by (seed, *keys)."""
    return np.random.Generator(np.random.Philox(seed_sequence(seed, *keys)))


def derive_seed(seed: int, *keys: SeedKey) -> int:
    """Derive a 64-bit child seed for the stream named by (seed, *keys)."""
    return int(seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)[0])


def replicate_seeds(seed: int, count: int, *keys: SeedKey) -> list[int]:
    """Seeds for replicates 0..count-1 under (seed, *keys)."""
    return [derive_seed(seed, *keys, index) for index in range(count)]
