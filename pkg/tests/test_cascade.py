"""Cascade refinement: fixed points, convergence, moments, derivative
estimates."""

from math import sqrt

import numpy as np
import pytest

from wavesat import (
    SampledFunction,
    cascade_step,
    compute_scaling,
    compute_wavelet,
    derivative_bound,
    derivative_growth,
    truncation_error_bound,
)
from wavesat.errors import GridTooCoarse, SupportMismatch

ROOT2 = sqrt(2.0)


def box_function(level: int) -> SampledFunction:
    values = np.zeros(2**level + 1)
    values[: 2**level] = 1.0
    return SampledFunction(level, 1, values)


def haar_lowpass():
    return np.array([1 / ROOT2, 1 / ROOT2])


class TestCascadeStep:
    def test_box_is_haar_fixed_point(self):
        f = box_function(3)
        refined = cascade_step(f, haar_lowpass())
        assert np.array_equal(refined.values[::2], f.values)

    def test_zero_function_stays_zero(self, db3):
        f = SampledFunction(2, 5, np.zeros(5 * 4 + 1))
        out = cascade_step(f, db3.h)
        assert not out.values.any()

    def test_db2_iterate_differences_shrink(self, db2):
        # Start from the box stretched to [0, 3]: successive sup-norm
        # differences on the common grid must decrease.
        values = np.zeros(3 * 2**0 + 1)
        values[0] = 1.0
        f = SampledFunction(0, 3, values)
        iterates = [f]
        for _ in range(4):
            iterates.append(cascade_step(iterates[-1], db2.h))
        d32 = np.abs(iterates[3].values[::2] - iterates[2].values).max()
        d43 = np.abs(iterates[4].values[::2] - iterates[3].values).max()
        assert d43 < d32

    def test_support_mismatch(self, db2):
        with pytest.raises(SupportMismatch):
            cascade_step(box_function(2), db2.h)

    def test_output_level_and_length(self, db3):
        f = compute_scaling(db3, 3)
        out = cascade_step(f, db3.h)
        assert out.level_n == 4
        assert len(out.values) == 5 * 2**4 + 1


class TestComputeScaling:
    def test_haar_gives_box_exactly(self, db1):
        for n in (1, 4, 9):
            phi = compute_scaling(db1, n)
            expected = box_function(n)
            assert np.array_equal(phi.values, expected.values)

    def test_unit_integral(self, db3):
        phi = compute_scaling(db3, 10)
        assert abs(phi.values.sum() * 2.0**-10 - 1.0) < 1e-6

    def test_db7_deep_iterates_agree(self, db7):
        phi14 = compute_scaling(db7, 14)
        phi15 = cascade_step(phi14, db7.h)
        diff = np.abs(phi15.values[::2] - phi14.values).max()
        assert diff < 1e-8

    def test_db3_partition_of_unity_at_half(self, db3):
        phi = compute_scaling(db3, 12)
        # sum_k phi(0.5 - k): the in-support evaluation points are
        # 0.5 + m for m = 0..4, summed directly from the samples.
        n = 12
        total = sum(phi.values[2 ** (n - 1) + m * 2**n] for m in range(5))
        assert abs(total - 1.0) < 1e-6

    @pytest.mark.parametrize("p", [3, 5, 10])
    def test_geometric_convergence_from_box(self, p):
        from wavesat import daubechies_filters

        pair = daubechies_filters(p)
        k = pair.support_k
        values = np.zeros(k + 1)
        values[0] = 1.0
        f = SampledFunction(0, k, values)
        iterates = [f]
        for _ in range(9):
            iterates.append(cascade_step(iterates[-1], pair.h))
        diffs = [
            np.abs(iterates[i + 1].values[::2] - iterates[i].values).max()
            for i in range(4, 9)
        ]
        assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))


class TestComputeWavelet:
    def test_haar_wavelet_signs(self, db1):
        phi = compute_scaling(db1, 6)
        psi = compute_wavelet(phi, db1.g)
        x = psi.grid()
        assert np.all(psi.values[x < 0.5] == 1.0)
        inner = (x >= 0.5) & (x < 1.0)
        assert np.all(psi.values[inner] == -1.0)

    def test_db3_three_vanishing_moments(self, db3_psi15):
        x = db3_psi15.grid()
        w = db3_psi15.grid_step
        for m in range(3):
            moment = float((x**m * db3_psi15.values).sum() * w)
            assert abs(moment) < 1e-6, m

    def test_db7_seven_vanishing_moments(self, db7):
        psi = compute_wavelet(compute_scaling(db7, 15), db7.g)
        x = psi.grid()
        w = psi.grid_step
        for m in range(7):
            assert abs(float((x**m * psi.values).sum() * w)) < 1e-5, m

    def test_zero_mean(self, db3_psi15):
        assert abs(db3_psi15.values.sum() * db3_psi15.grid_step) < 1e-6

    def test_compact_support_endpoints(self, db3_psi15, db2_psi15):
        for psi in (db3_psi15, db2_psi15):
            assert psi.values[0] == 0.0
            assert psi.values[-1] == 0.0

    def test_support_mismatch(self, db2, db3):
        phi = compute_scaling(db3, 4)
        with pytest.raises(SupportMismatch):
            compute_wavelet(phi, db2.g)


class TestDerivativeBound:
    def test_grid_too_coarse(self, db3):
        psi = compute_wavelet(compute_scaling(db3, 7), db3.g)
        with pytest.raises(GridTooCoarse):
            derivative_bound(psi)

    def test_haar_estimate_diverges(self, haar_psi12):
        assert derivative_growth(haar_psi12) > 3.9

    def test_db3_stable_between_levels(self, db3, db3_psi15):
        psi12 = compute_wavelet(compute_scaling(db3, 12), db3.g)
        b12 = derivative_bound(psi12)
        b15 = derivative_bound(db3_psi15)
        assert abs(b15 - b12) / b12 < 0.05

    def test_scaling_doubles_the_bound(self, db3_psi15):
        doubled = SampledFunction(
            db3_psi15.level_n, db3_psi15.support_k, 2.0 * db3_psi15.values
        )
        assert derivative_bound(doubled) == 2.0 * derivative_bound(db3_psi15)


def test_truncation_error_bound_values():
    assert truncation_error_bound(1.0, 1.0, 10) == pytest.approx(2.0**-10)
    # After 15 iterations a twice-differentiable profile is below 1e-9.
    assert truncation_error_bound(1.0, 2.0, 15) == pytest.approx(2.0**-30)
    assert truncation_error_bound(1.0, 2.0, 15) < 1e-9
    assert truncation_error_bound(0.0, 2.0, 5) == 0.0
