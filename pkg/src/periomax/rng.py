"""
Reproducible random streams.

Every stream is keyed by ``(master seed, stream index, *sub-keys)`` and backed
by the counter-based Philox bit generator, so replicate ``i`` of an experiment
draws the same numbers no matter which worker runs it or in which order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SeedSpec", "make_rng"]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus stream index.

    Distinct ``(seed, stream)`` pairs give statistically independent streams;
    the same pair reproduces identical draws.
    """

    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if int(self.stream) < 0:
            raise ValueError("stream index must be nonnegative")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)
        object.__setattr__(self, "stream", int(self.stream))

    def child(self, *keys: int) -> "SubStream":
        return SubStream(self, tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        return make_rng(self)


@dataclass(frozen=True)
class SubStream:
    """A stream derived from a :class:`SeedSpec` by extra integer keys."""

    parent: SeedSpec
    keys: tuple

    def child(self, *keys: int) -> "SubStream":
        return SubStream(self.parent, self.keys + tuple(int(k) for k in keys))

    def generator(self) -> np.random.Generator:
        return make_rng(self)


def make_rng(seed) -> np.random.Generator:
    """Return a Philox-backed generator for a seed description.

    Parameters
    ----------
    seed : SeedSpec, SubStream, int, numpy.random.Generator or None
        ``int`` is shorthand for ``SeedSpec(seed, 0)``. A ``Generator`` is
        passed through untouched. ``None`` means ``SeedSpec(0, 0)``.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = SeedSpec()
    elif isinstance(seed, (int, np.integer)):
        seed = SeedSpec(int(seed))
    if isinstance(seed, SeedSpec):
        key = (seed.stream,)
        master = seed.seed
    elif isinstance(seed, SubStream):
        key = (seed.parent.stream,) + seed.keys
        master = seed.parent.seed
    else:
        raise TypeError(f"cannot build a random stream from {type(seed).__name__}")
    ss = np.random.SeedSequence(entropy=master, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))
