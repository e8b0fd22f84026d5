import zlib

import numpy as np


class SeedStream:
    """Named, splittable source of generators derived from one 64-bit seed.

    ``SeedStream(7).generator("init")`` always yields the same stream, and
    streams with different names are statistically independent.
    """

    def __init__(self, seed: int, _key: tuple = ()):
        if seed < 0 or seed >= 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.seed = int(seed)
        self._key = _key

    def _sequence(self, name: str) -> np.random.SeedSequence:
        key = self._key + (zlib.crc32(name.encode("utf-8")),)
        return np.random.SeedSequence(entropy=self.seed, spawn_key=key)

    def generator(self, name: str) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self._sequence(name)))

    def child(self, name: str) -> "SeedStream":
        return SeedStream(self.seed, self._key + (zlib.crc32(name.encode("utf-8")),))

    def __repr__(self) -> str:
        return f"SeedStream(seed={self.seed}, key={self._key})"
