"""Time constant, trial aggregates and cost-weighted efficiency."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .simulation import TrialRecord
from .world import Strategy

RETRIEVAL_FRACTION = 0.63


class UsageError(ValueError):
    pass


def default_threshold(n_targets: int) -> int:
    """Target count for the time constant: 63% of targets, rounded up (158 of 250)."""
    return max(1, math.ceil(RETRIEVAL_FRACTION * n_targets))


@dataclass(frozen=True)
class TimeConstant:
    iterations: int
    censored: bool = False
    dt: float = 0.02

    @property
    def seconds(self) -> float:
        return self.iterations * self.dt


def time_constant(record: TrialRecord, threshold: int = 158) -> TimeConstant:
    """First iteration at which ``threshold`` targets were retrieved.

    Trials that never reach it are censored at the trial length.
    """
    if threshold < 1:
        raise UsageError("threshold must be >= 1")
    first = record.first_reach
    if threshold < len(first) and first[threshold] >= 0:
        return TimeConstant(int(first[threshold]), False, record.dt)
    return TimeConstant(record.iterations, True, record.dt)


@dataclass(frozen=True)
class TauStats:
    mean_iter: float
    std_iter: float
    censored: int
    dt: float = 0.02

    @property
    def mean_s(self) -> float:
        return self.mean_iter * self.dt

    @property
    def std_s(self) -> float:
        return self.std_iter * self.dt


def aggregate_tau(items: Iterable[TrialRecord | TimeConstant], threshold: int = 158) -> TauStats:
    """Mean and population standard deviation of per-trial time constants."""
    taus = [it if isinstance(it, TimeConstant) else time_constant(it, threshold) for it in items]
    if not taus:
        raise UsageError("aggregate_tau needs at least one trial")
    arr = np.array([t.iterations for t in taus], dtype=float)
    return TauStats(
        mean_iter=float(arr.mean()),
        std_iter=float(arr.std()),
        censored=sum(t.censored for t in taus),
        dt=taus[0].dt,
    )


@dataclass(frozen=True)
class CostModel:
    c_r: float
    c_s: float

    def __post_init__(self):
        if not (self.c_r > 0 and self.c_s > 0):
            raise UsageError("costs must be positive")

    @property
    def ratio(self) -> float:
        return self.c_r / self.c_s

    def label(self) -> str:
        return f"{self.c_r:g}:{self.c_s:g}"


# two rescuer:searcher cost settings per strategy
COST_SETTINGS: dict[Strategy, tuple[CostModel, CostModel]] = {
    Strategy.S1: (CostModel(5, 1), CostModel(7, 5)),
    Strategy.S2: (CostModel(3, 1), CostModel(6.5, 5)),
    Strategy.S3: (CostModel(1, 1), CostModel(6.5, 5)),
}


def efficiency(tau_mean: float, cost: CostModel, n_r: int, n_s: int) -> float:
    """``1 / (tau * (c * n_r + n_s))`` with ``tau`` in seconds."""
    if not tau_mean > 0:
        raise UsageError(f"tau_mean must be positive, got {tau_mean}")
    if n_r < 0 or n_s < 0 or n_r + n_s < 1:
        raise UsageError("need at least one agent")
    return 1.0 / (tau_mean * (cost.ratio * n_r + n_s))
