"""Seeded random array generation."""

import numpy as np

from ..errors import BadN


def random_normal(n, seed):
    """n standard-normal draws from a PCG64 generator; same seed, same array."""
    n = int(n)
    if n < 1:
        raise BadN("I need to generate at least one value.")
    rng = np.random.default_rng(int(seed))
    return [float(v) for v in rng.standard_normal(n)]
