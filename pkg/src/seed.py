"""
Deterministic random substreams.

Every random draw in the simulator comes from a generator derived from
(master seed, experiment tag, path). The same triple always yields the
same stream, whatever thread consumes it.
"""
import zlib
from typing import Tuple
import numpy as np


def tag_key(tag: str) -> int:
    """Stable integer key for an experiment tag."""
    return zlib.crc32(tag.encode('utf-8'))


def seed_sequence(seed: int, tag: str, *path: int) -> np.random.SeedSequence:
    """
    Build the seed sequence for a substream.

    Args:
        seed: Master seed (non-negative integer)
        tag: Experiment tag
        *path: Further non-negative integers, e.g. a group or run index

    Returns:
        SeedSequence keyed on (seed, tag, path)
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    spawn_key: Tuple[int, ...] = (tag_key(tag),) + tuple(int(p) for p in path)
    return np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)


def substream(seed: int, tag: str, *path: int) -> np.random.Generator:
    """Generator for the substream keyed on (seed, tag, path)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, tag, *path)))


def derive_seed(seed: int, tag: str, index: int) -> int:
    """
    Derive a child master seed, e.g. for the r-th repetition of an experiment.

    Returns:
        A 63-bit non-negative integer
    """
    state = seed_sequence(seed, tag, index).generate_state(2, np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))
