"""
Counter-based random streams.

Every stream is a Philox generator keyed by ``(seed, key...)`` through
``SeedSequence.spawn_key``, so replication ``i`` draws the same numbers no
matter which worker runs it or how many run concurrently.  Batched Monte
Carlo work is cut into fixed-size blocks; block ``b`` of lane ``L`` owns the
stream ``(seed, L, b)``.
"""
from concurrent.futures import ThreadPoolExecutor
import os

import numpy as np

BLOCK_SIZE = 1 << 14

_MAX_SEED = 1 << 64


def generator(seed: int, *key: int) -> np.random.Generator:
    if not 0 <= int(seed) < _MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def blocks(n: int, block_size: int = BLOCK_SIZE):
    """Yield ``(block_index, start, size)`` covering ``n`` replications."""
    for b, start in enumerate(range(0, n, block_size)):
        yield b, start, min(block_size, n - start)


def default_threads() -> int:
    return os.cpu_count() or 1


def map_blocks(fn, n: int, threads: int | None = None, block_size: int = BLOCK_SIZE):
    """Run ``fn(block_index, start, size)`` over all blocks, results in block order."""
    todo = list(blocks(n, block_size))
    threads = threads or default_threads()
    if threads <= 1 or len(todo) <= 1:
        return [fn(*b) for b in todo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), todo))
