"""Per-trial random streams.

Every trial (or replicate, or chunk) draws from its own generator keyed by
``(seed, stream, index)``.  Streams never depend on scheduling, so serial and
threaded runs consume identical numbers.
"""

from __future__ import annotations

import numpy as np

# stream tags; keep distinct so different consumers never share numbers
USERS_DARTS = 0
EXACT_1D = 1
DIRECT = 2


def trial_rng(seed: int, index: int, stream: int = USERS_DARTS) -> np.random.Generator:
    """Generator for trial ``index`` of run ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def chunks(n: int, size: int) -> list[tuple[int, int]]:
    """Split ``range(n)`` into fixed-size ``(start, stop)`` chunks."""
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]
