"""Counter-based per-replicate substreams.

A stream is identified by ``(master seed, replicate index, role)``. Its key is
a hash of the three, and draw ``i`` of the stream is a hash of ``key`` and
``i``. Nothing is stateful, so replicates can be computed in any order, on any
number of workers, with identical results.
"""
from concurrent.futures import ThreadPoolExecutor
from enum import IntEnum

import numpy as np

from .kernels import mix64

_MASK64 = (1 << 64) - 1
_ROLE_SALT = 0xD1B54A32D192ED03


class Role(IntEnum):
    GAMMA_SUM = 1
    GAMMA_SHAPE = 2
    LIMIT = 3
    NAIVE = 4
    HA = 5


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def stream_keys(seed, role, start, stop):
    """Keys of replicates ``start..stop-1`` for one role."""
    seed = check_seed(seed)
    base = mix64(np.array([(seed ^ (int(role) * _ROLE_SALT)) & _MASK64], dtype=np.uint64))
    base = mix64(base + np.uint64(int(role)))
    reps = np.arange(start, stop, dtype=np.uint64)
    return mix64(base ^ mix64(reps + np.uint64(1)))


def _chunks(reps, threads):
    threads = max(1, int(threads))
    size = max(1, -(-reps // threads))
    return [(lo, min(lo + size, reps)) for lo in range(0, reps, size)]


def map_replicates(fn, seed, role, reps, threads=1):
    """Evaluate ``fn(keys)`` over replicate chunks and concatenate.

    ``fn`` must be per-key (row i of the output depends on key i only), which
    makes the result independent of ``threads``.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    spans = _chunks(reps, threads)
    if len(spans) == 1:
        return fn(stream_keys(seed, role, 0, reps))
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        parts = list(pool.map(lambda span: fn(stream_keys(seed, role, *span)), spans))
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p) for p in zip(*parts))
    return np.concatenate(parts)
