"""Deterministic named sub-streams derived from a single seed."""

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Generator for the sub-stream `name` of the master seed.

    Stable across processes (no salted hashing): the stream key is the CRC32
    of the name.
    """
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key,)))


def chunk_streams(seed: int, name: str, chunks: int) -> list[np.random.Generator]:
    """Independently seeded generators for `chunks` deterministic MC chunks."""
    key = zlib.crc32(name.encode("utf-8"))
    return [
        np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key, i)))
        for i in range(chunks)
    ]
