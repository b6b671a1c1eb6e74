"""Deterministic seeded randomness with labelled substreams.

Every random draw in the package comes from an :class:`RngStream`. A stream is
identified by a 64-bit key. Child streams are derived from a parent key and a
label with the SplitMix64 finalizer::

    word(label) = label & (2**64 - 1)                  for int labels
                = first 8 bytes of blake2b(label), LE   for str labels
    child_key   = mix64(parent_key XOR mix64(word(label) + GOLDEN))

where ``mix64`` is the SplitMix64 output function and ``GOLDEN`` is
0x9E3779B97F4A7C15. Draws from a stream use numpy's PCG64 seeded with the key,
so results are identical on every platform numpy supports.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def label_word(label: int | str) -> int:
    if isinstance(label, bool):
        raise TypeError("boolean labels are ambiguous")
    if isinstance(label, int):
        return label & MASK64
    if isinstance(label, str):
        digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise TypeError(f"unsupported label type {type(label).__name__}")


def derive_key(parent: int, *labels: int | str) -> int:
    key = parent & MASK64
    for label in labels:
        key = mix64(key ^ mix64((label_word(label) + GOLDEN) & MASK64))
    return key


class RngStream:
    """A reproducible random stream addressed by a 64-bit key.

    Streams are cheap to create; the underlying generator is built lazily on
    the first draw. Substreams never share state with their parent, so a
    trial that owns its substream can run on any thread.
    """

    __slots__ = ("key", "_gen")

    def __init__(self, seed: int = 0):
        if seed < 0:
            raise ValueError("seed must be a non-negative 64-bit integer")
        self.key = seed & MASK64
        self._gen: np.random.Generator | None = None

    def __repr__(self) -> str:
        return f"RngStream(key={self.key:#018x})"

    def substream(self, *labels: int | str) -> RngStream:
        return RngStream(derive_key(self.key, *labels))

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            self._gen = np.random.Generator(np.random.PCG64(self.key))
        return self._gen

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return float(self.generator.random())

    def random(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1); same values as ``n`` calls to :meth:`uniform`."""
        return self.generator.random(n)

    def poisson(self, lam: float) -> int:
        return int(self.generator.poisson(lam))
