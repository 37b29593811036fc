"""Seeded random streams.

Every stream is a ``numpy.random.Generator`` over PCG64, seeded by a
``SeedSequence`` built from ``(seed, *keys)``. Deriving one stream per key
(trial number, group index, ...) keeps results independent of iteration
order, worker count and partitioning.
"""

from typing import Optional

import numpy as np

from fairkit.config import settings
from fairkit.errors import DomainError

SEED_BITS = 64


def resolve_seed(seed: Optional[int], default: int = 0) -> int:
    """Pick the explicit seed, else FAIRKIT_SEED, else ``default``."""
    if seed is None:
        seed = settings.seed if settings.seed is not None else default
    if not 0 <= seed < 2 ** SEED_BITS:
        raise DomainError(f"seed must be an unsigned {SEED_BITS}-bit integer, got {seed}")
    return seed


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for ``(seed, *keys)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def uniforms(seed: int, n: int, *keys: int) -> np.ndarray:
    """``n`` uniforms in [0, 1); element ``i`` depends only on ``(seed, keys, i)``."""
    return stream(seed, *keys).random(n)
