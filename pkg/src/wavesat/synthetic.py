"""Synthetic test functions with closed-form zero structure.

The squared-sine bump is the standard toy input: supported on [0, 2],
C1 across the support edges, zeros exactly {0, 2}, and its saturation
sum is identically 1 because sin^2 + cos^2 collapses.
"""

from __future__ import annotations

import numpy as np

from .cascade import SampledFunction


def sine_squared_bump(level_n: int = 12) -> SampledFunction:
    """psi(x) = sin(pi x / 2)^2 sampled on [0, 2] at the given level."""
    x = np.arange(2 * 2**level_n + 1) / 2.0**level_n
    return SampledFunction(level_n, 2, np.sin(np.pi * x / 2) ** 2)
