"""Scaling functions and wavelets on dyadic grids via the cascade map.

The refinement operator T acts on a function sampled at grid step 2^-n
and returns samples at step 2^-(n+1):

    (T f)(x) = sqrt(2) * sum_k h_k f(2x - k)

compute_scaling starts from the exact values of the scaling function at
the integers (eigenvector of the refinement transition matrix for
eigenvalue 1) so that every cascade step reproduces exact dyadic values
instead of merely converging to them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import GridTooCoarse, SupportMismatch
from .filters import FilterPair

# Safety factor applied to the finite-difference derivative maximum.
DERIV_SAFETY = 1.1

# Growth of the derivative estimate across two grid levels above which
# the sampled function is treated as non-C1 (a C1 function's estimate
# stabilizes; a jump grows by 4x per two levels).
DIVERGENCE_RATIO = 1.5


@dataclass(frozen=True)
class SampledFunction:
    """Samples of a function on the dyadic grid of [0, K].

    values[i] approximates f(i * 2^-level_n); the array has
    K * 2^level_n + 1 entries.
    """

    level_n: int
    support_k: int
    values: np.ndarray

    def __post_init__(self):
        expected = self.support_k * 2**self.level_n + 1
        if len(self.values) != expected:
            raise ValueError(
                f"expected {expected} samples for K={self.support_k} "
                f"at level {self.level_n}, got {len(self.values)}"
            )
        self.values.setflags(write=False)

    @property
    def grid_step(self) -> float:
        return 2.0**-self.level_n

    def grid(self) -> np.ndarray:
        """Sample abscissae in ascending order."""
        return np.arange(len(self.values)) * self.grid_step

    def coarsened(self, levels: int) -> "SampledFunction":
        """Restriction to the coarser grid 2^-(level_n - levels)."""
        if levels < 0 or levels > self.level_n:
            raise ValueError("cannot coarsen below level 0")
        return SampledFunction(
            self.level_n - levels, self.support_k, self.values[:: 2**levels]
        )


def _check_filter_support(k: int, coeffs: np.ndarray):
    if k != len(coeffs) - 1:
        raise SupportMismatch(
            f"support endpoint {k} inconsistent with filter length "
            f"{len(coeffs)} (expected K = len - 1)"
        )


def cascade_step(f: SampledFunction, h: np.ndarray) -> SampledFunction:
    """One refinement step: f at level n -> T f at level n + 1.

    Values outside [0, K] are exact zeros, so the sum over k only
    touches in-range indices.
    """
    h = np.asarray(h, dtype=float)
    _check_filter_support(f.support_k, h)
    k_max = f.support_k
    n = f.level_n
    out = np.zeros(k_max * 2 ** (n + 1) + 1)
    src = f.values
    root2 = sqrt(2)
    for k in range(len(h)):
        lo = k * 2**n  # first output index that reads src[0]
        hi = min(lo + len(src), len(out))
        if lo < len(out):
            out[lo:hi] += root2 * h[k] * src[: hi - lo]
    return SampledFunction(n + 1, k_max, out)


def _integer_values(pair: FilterPair) -> np.ndarray:
    """Exact scaling-function values at 0..K: eigenvector of the
    refinement transition matrix for eigenvalue 1, normalized to sum 1."""
    k_max = pair.support_k
    if pair.order_p == 1:
        # Box function; value 1 at 0 by right-continuity.
        return np.array([1.0, 0.0])
    h = pair.h
    size = k_max - 1
    matrix = np.zeros((size, size))
    for row in range(1, k_max):
        for col in range(1, k_max):
            idx = 2 * row - col
            if 0 <= idx < len(h):
                matrix[row - 1, col - 1] = sqrt(2) * h[idx]
    eigvals, eigvecs = np.linalg.eig(matrix)
    pick = int(np.argmin(np.abs(eigvals - 1.0)))
    vec = np.real(eigvecs[:, pick])
    vec = vec / vec.sum()
    values = np.zeros(k_max + 1)
    values[1:k_max] = vec
    return values


def compute_scaling(pair: FilterPair, n_iters: int) -> SampledFunction:
    """Scaling function after n_iters cascade steps, sampled at level n_iters."""
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    f = SampledFunction(0, pair.support_k, _integer_values(pair))
    for _ in range(n_iters):
        f = cascade_step(f, pair.h)
    return f


def compute_wavelet(phi: SampledFunction, g: np.ndarray) -> SampledFunction:
    """Wavelet samples at the scaling function's level:

        psi(x) = sqrt(2) * sum_k g_k phi(2x - k)

    Arguments 2x - k land on the level n-1 grid, a subset of phi's grid.
    """
    g = np.asarray(g, dtype=float)
    _check_filter_support(phi.support_k, g)
    k_max = phi.support_k
    n = phi.level_n
    out = np.zeros(k_max * 2**n + 1)
    src = phi.values
    root2 = sqrt(2)
    for k in range(len(g)):
        shift = k * 2**n
        i0 = (shift + 1) // 2
        i1 = min((len(src) - 1 + shift) // 2, len(out) - 1)
        if i1 >= i0:
            idx = 2 * np.arange(i0, i1 + 1) - shift
            out[i0 : i1 + 1] += root2 * g[k] * src[idx]
    return SampledFunction(n, k_max, out)


def _max_central_difference(f: SampledFunction) -> float:
    v = f.values
    return float(np.max(np.abs(v[2:] - v[:-2])) / (2 * f.grid_step))


def derivative_bound(psi: SampledFunction) -> float:
    """Upper estimate of max |psi'| on the grid.

    Central finite differences at the sample level, times a 1.1 safety
    factor.  The periodized function shares the bound since it is a sum
    of disjoint translates of psi on each period.  Raises GridTooCoarse
    below level 8.  For functions that are not C1 the estimate diverges
    with the level; use derivative_growth to detect that.
    """
    if psi.level_n < 8:
        raise GridTooCoarse(f"level {psi.level_n} < 8")
    return DERIV_SAFETY * _max_central_difference(psi)


def derivative_growth(psi: SampledFunction) -> float:
    """Ratio of the derivative estimate at the full level to the estimate
    two levels coarser.  Near 1 for C1 functions; 4 for a jump.  A ratio
    above DIVERGENCE_RATIO marks the bound as divergent."""
    if psi.level_n < 8:
        raise GridTooCoarse(f"level {psi.level_n} < 8")
    fine = _max_central_difference(psi)
    coarse = _max_central_difference(psi.coarsened(2))
    return fine / coarse if coarse > 0 else float("inf")


def truncation_error_bound(c: float, s: float, n: int) -> float:
    """Cascade truncation error bound c * 2^(-n s) after n iterations for
    a function of smoothness exponent s."""
    return c * 2.0 ** (-n * s)
