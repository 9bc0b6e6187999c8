"""Translate schedules that keep dilates of G away from zero.

A schedule assigns to every scale j a translate vector p_bar(j) so that
for every point x of the period cube, every window of N(d) consecutive
scales contains one j with prod_i |G(2^j x_i - p_(j,i))| >= alpha^d.

The construction works in blocks.  A block opens with a reset slot
(translates 0), which covers points away from the zeros of G at the
base scale; the remaining slots re-target the translates at the scaled
zero positions: interior-cell slots saturate every coordinate at a zero
center, boundary-cell slots pin the coordinates that sit near a zero
(mean-value argument keeps them above eta/2 on the whole ball) and
recurse on the remaining coordinates.  Blocks tile the scale axis, so
the schedule is periodic and any long enough window contains a complete
block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import log2

from .analysis import ZeroSet, estimate_alpha_tilde
from .cascade import SampledFunction
from .errors import HorizonOverflow, SaturationFailure, WindowNotFound
from .periodized import (
    DyadicRational,
    G1_eval,
    ScheduleParams,
    schedule_params,
)

# Eager materialization cap for plan entries (lazy entry() is unbounded).
MAX_EAGER_HORIZON = 2_000_000

TAG_RESET = "block-reset"
TAG_INTERIOR = "interior-cell"
TAG_BOUNDARY = "boundary-cell"


@dataclass(frozen=True)
class PartitionCell:
    """One cell of the block partition: indices m_i in {0..N} per
    coordinate, where index 0 is the far-from-zeros region and index
    m >= 1 the ball around the m-th zero."""

    indices: tuple[int, ...]

    @property
    def kind(self) -> str:
        nonzero = sum(1 for m in self.indices if m != 0)
        if nonzero == 0:
            return TAG_RESET
        if nonzero == len(self.indices):
            return TAG_INTERIOR
        return TAG_BOUNDARY

    @property
    def saturated(self) -> tuple[int, ...]:
        """Coordinate positions pinned near a zero (index != 0)."""
        return tuple(i for i, m in enumerate(self.indices) if m != 0)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.indices) if m == 0)


def partition_cells(zero_count: int, dim: int):
    """All (N+1)^dim cells in deterministic lexicographic order."""
    for indices in itertools.product(range(zero_count + 1), repeat=dim):
        yield PartitionCell(indices)


@dataclass(frozen=True)
class SequencePlan:
    """Periodic translate schedule for one dimension.

    entry(j) is defined for every scale j >= base_scale; entries repeat
    with period block_length (= the window length N(d)), inside which
    the much shorter inner block tiles until the period truncates it.
    provenance tags carry the construction case of each slot.
    """

    dimension: int
    horizon: int
    block_length: int
    base_scale: int
    inner: tuple[tuple[int, ...], ...]
    inner_tags: tuple[str, ...]
    first_block: tuple[tuple[int, ...], ...]
    first_tags: tuple[str, ...]
    # Saturated-coordinate centers per inner slot: tuples of
    # (coordinate, center) pairs; empty for reset slots.
    inner_centers: tuple[tuple[tuple[int, DyadicRational], ...], ...] = field(
        repr=False, default=()
    )

    def entry(self, j: int) -> tuple[int, ...]:
        return self._lookup(j, self.first_block, self.inner)

    def tag(self, j: int) -> str:
        return self._lookup(j, self.first_tags, self.inner_tags)

    def _lookup(self, j: int, first, periodic):
        if j < self.base_scale:
            raise ValueError(f"plan starts at scale {self.base_scale}, got {j}")
        offset = (j - self.base_scale) % self.block_length
        if offset < len(first):
            return first[offset]
        return periodic[offset % len(periodic)]

    def entries(self) -> list[tuple[int, tuple[int, ...]]]:
        """Materialized (j, p_bar) rows for base_scale <= j <= base + horizon."""
        if self.horizon > MAX_EAGER_HORIZON:
            raise HorizonOverflow(
                f"horizon {self.horizon} exceeds eager cap {MAX_EAGER_HORIZON}"
            )
        return [
            (j, self.entry(j))
            for j in range(self.base_scale, self.base_scale + self.horizon + 1)
        ]

    def provenance(self) -> list[str]:
        return [
            self.tag(j)
            for j in range(self.base_scale, self.base_scale + self.horizon + 1)
        ]


def select_p(
    psi: SampledFunction, j: int, c: DyadicRational, eta: float
) -> int:
    """Translate p in {0..K-1} maximizing |G(2^j c - p)|, smallest on ties.

    Certified saturation (sum of |G| over one period of translates is at
    least eta * K everywhere) guarantees the maximum reaches eta; a
    shortfall means eta is inconsistent with the samples."""
    best_v, best_p = -1.0, 0
    for p in range(psi.support_k):
        v = abs(G1_eval(psi, j, p, c))
        if v > best_v:
            best_v, best_p = v, p
    if best_v < eta:
        raise SaturationFailure(
            f"max translate value {best_v:.3e} below eta {eta:.3e} "
            f"at scale {j}"
        )
    return best_p


class _BlockBuilder:
    """Recursive inner-block construction, memoized per sub-dimension."""

    def __init__(self, psi: SampledFunction, params: ScheduleParams):
        self.psi = psi
        self.centers = [DyadicRational.from_float(z) for z in params.zeros]
        self.eta = params.eta
        self.cache: dict[int, tuple[list, list, list]] = {}

    def block(self, dim: int) -> tuple[list, list, list]:
        if dim not in self.cache:
            self.cache[dim] = self._build(dim)
        return self.cache[dim]

    def _build(self, dim: int):
        n_zeros = len(self.centers)
        slots: list[tuple[int, ...]] = [(0,) * dim]
        tags: list[str] = [TAG_RESET]
        cents: list[tuple[tuple[int, DyadicRational], ...]] = [()]
        if dim == 1:
            for m in range(1, n_zeros + 1):
                c = self.centers[m - 1]
                slots.append((select_p(self.psi, m, c, self.eta),))
                tags.append(TAG_INTERIOR)
                cents.append(((0, c),))
            return slots, tags, cents
        # Interior cells: every coordinate near a zero; one dedicated slot
        # per cell, indexed 1..N^dim.
        for cell_rank in range(n_zeros**dim):
            rem = cell_rank
            ms = []
            for _ in range(dim):
                ms.append(rem % n_zeros + 1)
                rem //= n_zeros
            offset = len(slots)
            entry = tuple(
                select_p(self.psi, offset, self.centers[m - 1], self.eta)
                for m in ms
            )
            slots.append(entry)
            tags.append(TAG_INTERIOR)
            cents.append(tuple((i, self.centers[m - 1]) for i, m in enumerate(ms)))
        # Mixed cells: pin the near-zero coordinates across a sub-block
        # window, recurse on the rest.
        for cell in partition_cells(n_zeros, dim):
            if cell.kind != TAG_BOUNDARY:
                continue
            sub_slots, _, _ = self.block(len(cell.free))
            for sub_entry in sub_slots:
                offset = len(slots)
                entry = [0] * dim
                for i in cell.saturated:
                    c = self.centers[cell.indices[i] - 1]
                    entry[i] = select_p(self.psi, offset, c, self.eta)
                for rank, i in enumerate(cell.free):
                    entry[i] = sub_entry[rank]
                slots.append(tuple(entry))
                tags.append(TAG_BOUNDARY)
                cents.append(
                    tuple(
                        (i, self.centers[cell.indices[i] - 1])
                        for i in cell.saturated
                    )
                )
        return slots, tags, cents


def build_sequence_1d(
    psi: SampledFunction,
    params: ScheduleParams,
    J: int = 0,
    p_J: int = 0,
    horizon: int = 200,
) -> SequencePlan:
    """One-dimensional schedule starting at scale J with translate p_J.

    Blocks have N+1 slots: the reset slot followed by one slot per zero,
    whose translate saturates G at the scaled zero position.  Every
    window of N(1) = 2(N+1) scales then contains a complete block, so
    every x is covered within any such window.
    """
    if horizon > MAX_EAGER_HORIZON:
        raise HorizonOverflow(f"horizon {horizon} exceeds {MAX_EAGER_HORIZON}")
    builder = _BlockBuilder(psi, params)
    slots, tags, cents = builder.block(1)
    first_slots, first_tags = list(slots), list(tags)
    if p_J != 0:
        first_slots = [(p_J,)]
        first_tags = [TAG_RESET]
        for m, c in enumerate(builder.centers, start=1):
            shifted = c + p_J
            first_slots.append((select_p(psi, m, shifted, params.eta),))
            first_tags.append(TAG_INTERIOR)
    return SequencePlan(
        dimension=1,
        horizon=horizon,
        block_length=params.schedule[0],
        base_scale=J,
        inner=tuple(slots),
        inner_tags=tuple(tags),
        first_block=tuple(first_slots),
        first_tags=tuple(first_tags),
        inner_centers=tuple(cents),
    )


def build_sequence_nd(
    psi: SampledFunction,
    params: ScheduleParams,
    d: int,
    horizon: int,
) -> SequencePlan:
    """Schedule for dimension d starting at scale 0 with zero translates.

    The inner block enumerates the partition cells: one reset slot, one
    slot per all-near-zero cell, and one sub-block window per mixed
    cell.  The block length stays polynomial in the zero count even
    though the formal window N(d) grows doubly exponentially, so entries
    materialize lazily through entry(j)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if d > params.dimension:
        raise ValueError(
            f"params cover dimensions 1..{params.dimension}, got {d}"
        )
    if horizon > MAX_EAGER_HORIZON:
        raise HorizonOverflow(
            f"horizon {horizon} exceeds eager cap {MAX_EAGER_HORIZON}; "
            "query entry(j) lazily instead"
        )
    builder = _BlockBuilder(psi, params)
    slots, tags, cents = builder.block(d)
    window = params.schedule[d - 1]
    if window < 2 * len(slots):
        raise WindowNotFound(
            f"window {window} shorter than two blocks ({2 * len(slots)}); "
            "coverage guarantee void"
        )
    return SequencePlan(
        dimension=d,
        horizon=horizon,
        block_length=window,
        base_scale=0,
        inner=tuple(slots),
        inner_tags=tuple(tags),
        first_block=tuple(slots),
        first_tags=tuple(tags),
        inner_centers=tuple(cents),
    )


def derive_schedule(
    psi: SampledFunction, zs: ZeroSet, eta: float, m_g: float, d: int
) -> ScheduleParams:
    """Estimate alpha_tilde for the psi at hand and fill the schedule
    constants for ambient dimension d."""
    probe = schedule_params(zs, eta, m_g, alpha_tilde=1.0, d=d)
    at_log2 = estimate_alpha_tilde(psi, zs, probe.omega_log2)
    return schedule_params(
        zs, eta, m_g, alpha_tilde=0.0, d=d, alpha_tilde_log2=at_log2
    )


def greedy_window(
    psi: SampledFunction,
    plan: SequencePlan,
    alpha: float,
    samples: list[tuple[DyadicRational, ...]],
    j_range: range,
    alpha_log2: float | None = None,
) -> int:
    """Smallest w such that every sample is covered within [J, J+w] for
    every J in j_range.  Raises WindowNotFound when even the full block
    length fails for some (x, J): that indicates a plan bug, since the
    construction guarantees coverage within one block length."""
    if alpha_log2 is None:
        alpha_log2 = log2(alpha) if alpha > 0 else float("-inf")
    d = plan.dimension
    threshold = d * alpha_log2
    worst = 0
    for x in samples:
        if len(x) != d:
            raise ValueError(f"sample of dimension {len(x)}, plan has {d}")
        cache: dict[int, float] = {}
        for J in j_range:
            hit = None
            for j in range(J, J + plan.block_length + 1):
                if j not in cache:
                    total = 0.0
                    for i, xi in enumerate(x):
                        v = abs(G1_eval(psi, j, plan.entry(j)[i], xi))
                        if v == 0.0:
                            total = float("-inf")
                            break
                        total += log2(v)
                    cache[j] = total
                if cache[j] >= threshold:
                    hit = j - J
                    break
            if hit is None:
                raise WindowNotFound(
                    f"no covering scale in [{J}, {J + plan.block_length}] "
                    f"for sample {tuple(float(c) for c in x)}"
                )
            worst = max(worst, hit)
    return worst
