"""Seeded impulse-noise generation."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .threshold import GreyImage


def salt_pepper(img: GreyImage, p: float, seed: int) -> GreyImage:
    """Corrupt each pixel independently with probability p.

    A corrupted pixel becomes 0 or max_level with equal probability,
    regardless of its original value. Deterministic for a fixed seed.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"noise rate must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    hit = rng.random(img.levels.shape) < p
    salt = rng.integers(0, 2, size=img.levels.shape).astype(np.int32)
    out = np.where(hit, salt * img.max_level, img.levels)
    return GreyImage(out, img.max_level)
