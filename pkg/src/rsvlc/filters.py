"""Small shared signal filters."""

from __future__ import annotations

import numpy as np


def centered_moving_average(values, width: int) -> np.ndarray:
    """Moving average centered on each sample, shrinking at the edges.

    For even widths the window extends one sample further to the right
    ([i - (w-1)//2, i + w//2]); near the ends it is clipped to the signal
    and the mean taken over the samples actually present.
    """
    x = np.asarray(values, dtype=float)
    if width < 1:
        raise ValueError(f"window width must be >= 1, got {width}")
    n = len(x)
    half_lo = (width - 1) // 2
    half_hi = width - 1 - half_lo
    csum = np.concatenate(([0.0], np.cumsum(x)))
    idx = np.arange(n)
    a = np.maximum(idx - half_lo, 0)
    b = np.minimum(idx + half_hi, n - 1)
    return (csum[b + 1] - csum[a]) / (b - a + 1)
