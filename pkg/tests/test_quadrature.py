"""Midpoint grids, compensated summation, and the evaluation budget."""

import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apspec import BudgetExceededError, LadderSpec, PreconditionError, QuadratureSpec
from apspec.quadrature import (
    BUDGET_ENV_VAR,
    KahanAccumulator,
    check_budget,
    default_points_per_axis,
    full_grid,
    midpoint_nodes,
    point_budget,
    reduce_in_blocks,
    symmetric_axes,
    tensor_integral,
    tensor_mean,
    tensor_sum,
)


class TestSpecs:
    def test_quadrature_spec_validation(self):
        with pytest.raises(PreconditionError):
            QuadratureSpec(half_width=0.0, points_per_axis=10)
        with pytest.raises(PreconditionError):
            QuadratureSpec(half_width=1.0, points_per_axis=1)
        with pytest.raises(PreconditionError):
            QuadratureSpec(half_width=1.0, points_per_axis=10, summation="magic")

    def test_ladder_doubles_half_widths(self):
        lad = LadderSpec(base=50.0, levels=4, tail_levels=2)
        assert list(lad.half_widths()) == [50.0, 100.0, 200.0, 400.0]

    def test_ladder_validation(self):
        with pytest.raises(PreconditionError):
            LadderSpec(base=50.0, levels=2, tail_levels=3)


class TestMidpointNodes:
    def test_centers_of_equal_cells(self):
        nodes = midpoint_nodes(0.0, 1.0, 4)
        assert np.allclose(nodes, [0.125, 0.375, 0.625, 0.875])

    def test_symmetric_axes_are_symmetric(self):
        (lo, hi, n), = symmetric_axes(3.0, 8, 1)
        nodes = midpoint_nodes(lo, hi, n)
        assert np.allclose(nodes, -nodes[::-1])


class TestSummation:
    def test_kahan_matches_fsum_on_adversarial_input(self):
        vals = [1e16, 1.0, -1e16, 1.0] * 100
        acc = KahanAccumulator()
        for v in vals:
            acc.add(v)
        assert acc.total == pytest.approx(math.fsum(vals), abs=1e-9)

    def test_reduce_in_blocks_compensated(self):
        parts = np.array([1e16, 1.0, -1e16, 1.0])
        assert reduce_in_blocks(parts, "compensated") == pytest.approx(2.0)

    def test_reduce_in_blocks_plain(self):
        parts = np.arange(10.0)
        assert reduce_in_blocks(parts, "plain") == pytest.approx(45.0)


class TestTensorRoutines:
    def test_mean_of_constant_is_exact(self):
        axes = [(-2.0, 2.0, 64), (-2.0, 2.0, 32)]
        out = tensor_mean(lambda c: np.ones(c.shape[0]), axes, "compensated")
        assert out == 1.0

    def test_integral_of_constant_is_volume(self):
        axes = [(-2.0, 2.0, 16), (-1.0, 1.0, 16)]
        out = tensor_integral(lambda c: np.ones(c.shape[0]), axes, "compensated")
        assert out == pytest.approx(8.0, rel=1e-14)

    def test_sum_counts_points(self):
        axes = [(-1.0, 1.0, 8), (-1.0, 1.0, 4)]
        out = tensor_sum(lambda c: np.ones(c.shape[0]), axes, "compensated")
        assert out == pytest.approx(32.0)

    @given(st.floats(min_value=0.1, max_value=3.0), st.integers(min_value=8, max_value=512))
    @settings(max_examples=30, deadline=None)
    def test_midpoint_exponential_closed_form(self, mu, n):
        # the midpoint mean of e^{i mu x} over [-T, T] telescopes exactly
        T = 5.0
        axes = [(-T, T, n)]
        out = tensor_mean(lambda c: np.exp(1j * mu * c[:, 0]), axes, "compensated")
        expected = math.sin(mu * T) / (n * math.sin(mu * T / n))
        assert out == pytest.approx(expected, abs=5e-13)

    def test_full_grid_orders_first_axis_slowest(self):
        grid = full_grid([np.array([0.0, 1.0]), np.array([10.0, 20.0])])
        assert grid.shape == (4, 2)
        assert np.allclose(grid[0], [0.0, 10.0])
        assert np.allclose(grid[1], [0.0, 20.0])


class TestBudget:
    def test_default_budget(self, monkeypatch):
        monkeypatch.delenv(BUDGET_ENV_VAR, raising=False)
        assert point_budget() == 10 ** 8

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV_VAR, "1000")
        assert point_budget() == 1000
        with pytest.raises(BudgetExceededError):
            check_budget(10 ** 6)

    def test_tensor_sum_respects_budget(self, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV_VAR, "100")
        with pytest.raises(BudgetExceededError):
            tensor_sum(lambda c: np.ones(c.shape[0]), [(-1.0, 1.0, 64), (-1.0, 1.0, 64)],
                       "compensated")

    def test_malformed_env_value_rejected(self, monkeypatch):
        monkeypatch.setenv(BUDGET_ENV_VAR, "not-a-number")
        with pytest.raises(PreconditionError):
            point_budget()
        monkeypatch.setenv(BUDGET_ENV_VAR, "-3")
        with pytest.raises(PreconditionError):
            point_budget()


class TestDefaultPoints:
    def test_scales_down_with_dimension(self):
        assert default_points_per_axis(1) == 4096
        assert default_points_per_axis(2) == 64
        assert default_points_per_axis(3) == 16
