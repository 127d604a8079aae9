"""Deterministic random-number streams.

All randomness in the package flows through RngStream, a thin wrapper
around numpy's PCG64 generator keyed by a 64-bit seed plus a stream id.
Distinct stream ids give statistically independent streams for the same
seed, which is how parallel replications stay reproducible regardless of
scheduling order.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

_SEED_MAX = 2**64 - 1


def _check_seed(seed):
    if not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) <= _SEED_MAX:
        raise ParameterError(f"seed must be in [0, 2**64), got {seed}")
    return int(seed)


def derive_seed(seed, *path):
    """Derive a new 64-bit seed from a base seed and an integer path.

    Uses SeedSequence hashing, so derived seeds are stable across
    platforms and statistically independent of the base stream.
    """
    seed = _check_seed(seed)
    key = tuple(int(p) for p in path)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


class RngStream:
    """A deterministic random stream identified by (seed, stream_id).

    The same (seed, stream_id) pair always yields the bit-identical
    sequence of variates. `split` creates a child stream whose output is
    independent of the parent and of every sibling.
    """

    def __init__(self, seed, stream_id=0, _path=()):
        self.seed = _check_seed(seed)
        if not isinstance(stream_id, (int, np.integer)) or int(stream_id) < 0:
            raise ParameterError(f"stream_id must be a nonnegative integer, got {stream_id!r}")
        self.stream_id = int(stream_id)
        self._path = tuple(int(p) for p in _path)
        key = (self.stream_id,) + self._path
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=key)
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def split(self, index):
        """Return an independent child stream for the given index."""
        if not isinstance(index, (int, np.integer)) or int(index) < 0:
            raise ParameterError(f"split index must be a nonnegative integer, got {index!r}")
        return RngStream(self.seed, self.stream_id, self._path + (int(index),))

    def __repr__(self):
        tail = f", path={self._path}" if self._path else ""
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}{tail})"
