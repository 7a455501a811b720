"""Keyed deterministic random streams.

All randomness in the toolkit starts from one integer seed. Each consumer
derives its own independent stream from (seed, key...) so that adding a
random draw in one place never shifts the numbers seen elsewhere.
"""

import zlib
from typing import Union

import numpy as np

Key = Union[str, int]


def _key_word(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    return int(key) & 0xFFFFFFFF


def make_rng(seed: int, *keys: Key) -> np.random.Generator:
    """Return a numpy Generator for the stream named by `keys` under `seed`."""
    sequence = np.random.SeedSequence(
        entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
        spawn_key=tuple(_key_word(k) for k in keys),
    )
    return np.random.default_rng(sequence)
