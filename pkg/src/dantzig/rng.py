"""Seeded random streams.

Every replication/trial draws from its own generator derived from
``(master_seed, index)`` through :class:`numpy.random.SeedSequence`, so
results do not depend on execution order or thread count. Gaussian draws
use numpy's PCG64 bit generator with the ziggurat normal sampler.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

GENERATOR_NAME = "numpy.PCG64/SeedSequence([seed, index]); normals via ziggurat"


def trial_rng(seed, index):
    if seed is None or int(seed) < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def default_threads():
    return os.cpu_count() or 1


def parallel_map(fn, items, threads=None):
    """``list(map(fn, items))`` on a thread pool; output order matches input."""
    items = list(items)
    threads = default_threads() if threads is None else int(threads)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
