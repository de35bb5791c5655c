"""Rent-or-buy with per-day demand: rent a machine-day for 1 or buy a machine
for b and cover one unit of demand on every later day.

An instance with daily demands decomposes into independent classical
instances, one per demand unit: unit j exists exactly on the days with
demand >= j, and those days are renumbered consecutively so each unit sees
an ordinary rent-or-buy problem.  Predictions decompose the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .ski_rental import (
    PolicyKind,
    SkiInstance,
    SkiPolicy,
    policy_cost,
    ski_opt,
)


@dataclass(frozen=True)
class DemandInstance:
    """Daily demand, daily predicted demand, and the shared buy cost."""

    b: int
    demand: Tuple[int, ...]
    predicted: Tuple[float, ...]

    def __post_init__(self):
        if self.b < 2:
            raise ValueError(f"buy cost b must be >= 2, got {self.b!r}")
        if len(self.demand) < 1 or len(self.demand) != len(self.predicted):
            raise ValueError("demand and predicted must be non-empty vectors of equal length")
        for d in self.demand:
            if not isinstance(d, (int, np.integer)) or d < 0:
                raise ValueError(f"daily demand must be a non-negative integer, got {d!r}")
        for y in self.predicted:
            if not (math.isfinite(y) and y >= 0):
                raise ValueError(f"predicted demand must be a finite real >= 0, got {y!r}")
        if max(self.demand) < 1:
            raise ValueError("at least one day must have positive demand")

    @property
    def horizon(self) -> int:
        return len(self.demand)

    @property
    def max_demand(self) -> int:
        return max(self.demand)

    @property
    def error(self) -> float:
        """Total L1 error between predicted and actual daily demand."""
        return float(sum(abs(x - y) for x, y in zip(self.demand, self.predicted)))


@dataclass(frozen=True)
class DemandLevel:
    """One demand unit viewed as a classical rent-or-buy instance."""

    level: int
    active_days: Tuple[int, ...]
    predicted_days: int

    def ski_instance(self, b: int) -> SkiInstance:
        return SkiInstance(b, len(self.active_days), float(self.predicted_days))


def decompose(instance: DemandInstance) -> List[DemandLevel]:
    """Split an instance into one classical level per demand unit.

    Level j is active on the (renumbered) days with demand >= j and carries
    the thresholded prediction: the count of days with predicted demand >= j.
    """
    levels = []
    for level in range(1, instance.max_demand + 1):
        days = tuple(i + 1 for i, d in enumerate(instance.demand) if d >= level)
        predicted = sum(1 for y in instance.predicted if y >= level)
        levels.append(DemandLevel(level, days, predicted))
    return levels


def demand_opt(instance: DemandInstance) -> int:
    """Offline optimum: each demand unit independently rents or buys."""
    return sum(min(instance.b, len(level.active_days)) for level in decompose(instance))


def demand_algorithm_cost(
    instance: DemandInstance,
    policy: SkiPolicy,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Total cost of running a lambda rule independently on every level.

    Randomized levels are scored by exact expectation when no generator is
    passed, otherwise each level samples its own buy day from ``rng``.
    """
    if policy.kind is PolicyKind.NAIVE:
        raise ValueError("the demand extension is defined for the lambda rules only")
    total = 0.0
    for level in decompose(instance):
        total += policy_cost(level.ski_instance(instance.b), policy, rng)
    return total


def demand_level_error(instance: DemandInstance) -> float:
    """Sum over levels of the per-level prediction error |x_level - y_level|."""
    return float(
        sum(abs(len(lv.active_days) - lv.predicted_days) for lv in decompose(instance))
    )


def demand_opt_levels(instance: DemandInstance) -> List[int]:
    """Per-level offline optima; sums to `demand_opt`."""
    return [ski_opt(lv.ski_instance(instance.b)) for lv in decompose(instance)]
