"""Tensor-grid midpoint quadrature with deterministic summation.

The engine walks the flattened grid in fixed-size blocks.  Each block is
reduced with numpy's pairwise sum and the block partials are combined in
index order with Kahan compensation.  Because the partition depends only
on the block size, serial and parallel schedules produce bitwise identical
results; a parallel driver could evaluate blocks out of order and still
combine partials in order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceededError, PreconditionError

DEFAULT_POINT_BUDGET = 10 ** 8
BUDGET_ENV_VAR = "APSPEC_MAX_POINTS"

# flattened-grid block size; fixed so the reduction order never changes
REDUCE_BLOCK = 1 << 16

COMPENSATED = "compensated"
NAIVE = "naive"


@dataclass(frozen=True)
class QuadratureSpec:
    """Midpoint rule on [-half_width, half_width]^p with n points per axis."""

    half_width: float
    points_per_axis: int
    summation: str = COMPENSATED

    def __post_init__(self):
        if not self.half_width > 0:
            raise PreconditionError("half_width must be positive, got %r" % (self.half_width,))
        if self.points_per_axis < 2:
            raise PreconditionError("points_per_axis must be >= 2, got %r" % (self.points_per_axis,))
        if self.summation not in (COMPENSATED, NAIVE):
            raise PreconditionError("summation must be %r or %r" % (COMPENSATED, NAIVE))


@dataclass(frozen=True)
class LadderSpec:
    """Doubling ladder T_k = base * 2^k, k = 0 .. levels-1.

    The limsup surrogate takes the max over the top tail_levels entries.
    """

    base: float = 50.0
    levels: int = 4
    tail_levels: int = 2

    def __post_init__(self):
        if not self.base > 0:
            raise PreconditionError("ladder base must be positive")
        if self.levels < 1:
            raise PreconditionError("ladder needs at least one level")
        if not 1 <= self.tail_levels <= self.levels:
            raise PreconditionError(
                "tail_levels must lie in [1, levels], got %d with %d levels"
                % (self.tail_levels, self.levels)
            )

    def half_widths(self) -> np.ndarray:
        return self.base * np.exp2(np.arange(self.levels))


def point_budget() -> int:
    """Maximum grid size, overridable via the APSPEC_MAX_POINTS variable."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_POINT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError("%s must be an integer, got %r" % (BUDGET_ENV_VAR, raw))
    if value < 1:
        raise PreconditionError("%s must be positive, got %d" % (BUDGET_ENV_VAR, value))
    return value


def check_budget(total_points: int):
    budget = point_budget()
    if total_points > budget:
        raise BudgetExceededError(
            "grid of %d points exceeds the budget of %d (set %s to raise it)"
            % (total_points, budget, BUDGET_ENV_VAR)
        )


def midpoint_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """Cell midpoints of the uniform n-cell partition of [lo, hi]."""
    h = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * h


class KahanAccumulator:
    """Compensated scalar accumulator; works for float and complex.

    Uses the branch-free swing-safe variant: the carry collects whichever
    operand was truncated, so alternating large and small addends survive.
    """

    def __init__(self, zero=0.0):
        self._sum = zero
        self._carry = zero

    def add(self, value):
        t = self._sum + value
        if abs(self._sum) >= abs(value):
            self._carry += (self._sum - t) + value
        else:
            self._carry += (value - t) + self._sum
        self._sum = t

    @property
    def total(self):
        return self._sum + self._carry


def reduce_in_blocks(partials: Sequence, summation: str):
    """Combine partial sums in order, compensated or naive."""
    if summation == NAIVE:
        total = partials[0]
        for p in partials[1:]:
            total = total + p
        return total
    acc = KahanAccumulator(zero=partials[0] * 0)
    for p in partials:
        acc.add(p)
    return acc.total


Axis = tuple[float, float, int]


def tensor_sum(fn: Callable[[np.ndarray], np.ndarray], axes: Sequence[Axis],
               summation: str = COMPENSATED, block: int = REDUCE_BLOCK):
    """Sum fn over the tensor midpoint grid defined by axes.

    fn maps an (m, p) coordinate block to m values.  Returns the plain sum
    of the n_1*...*n_p node values; multiply by the cell volume for an
    integral or divide by the node count for a mean.
    """
    ns = [int(n) for (_, _, n) in axes]
    total = 1
    for n in ns:
        if n < 1:
            raise PreconditionError("axis point counts must be >= 1")
        total *= n
    check_budget(total)
    nodes = [midpoint_nodes(lo, hi, n) for (lo, hi, n) in axes]
    partials = []
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        coords = np.empty((idx.shape[0], len(axes)), dtype=np.float64)
        for j, ix in enumerate(np.unravel_index(idx, ns)):
            coords[:, j] = nodes[j][ix]
        partials.append(np.add.reduce(fn(coords)))
    return reduce_in_blocks(partials, summation)


def tensor_integral(fn: Callable[[np.ndarray], np.ndarray], axes: Sequence[Axis],
                    summation: str = COMPENSATED):
    """Midpoint-rule integral of fn over the box prod [lo_i, hi_i]."""
    cell = 1.0
    for (lo, hi, n) in axes:
        cell *= (hi - lo) / n
    return tensor_sum(fn, axes, summation) * cell


def tensor_mean(fn: Callable[[np.ndarray], np.ndarray], axes: Sequence[Axis],
                summation: str = COMPENSATED):
    """Mean of fn over the tensor midpoint grid (sum / node count)."""
    count = 1
    for (_, _, n) in axes:
        count *= int(n)
    return tensor_sum(fn, axes, summation) / count


def symmetric_axes(half_width: float, points_per_axis: int, dim: int) -> list[Axis]:
    return [(-half_width, half_width, points_per_axis)] * dim


def full_grid(arrays: Sequence[np.ndarray]) -> np.ndarray:
    """All coordinate combinations of the given 1-D arrays, shape (N, p)."""
    mesh = np.meshgrid(*arrays, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def default_points_per_axis(dim: int, target: int = 4096) -> int:
    """Per-axis resolution that keeps the total grid near the 1-D target."""
    return max(8, int(round(target ** (1.0 / dim))))
