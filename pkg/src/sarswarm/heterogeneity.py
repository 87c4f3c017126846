"""Team heterogeneity from behavior-tree action scores.

Each species is described by the set of behavior-tree actions it can perform.
The inter-species distance is the difference of the two species' total scores
normalised by the maximal tree score, and the heterogeneity of a two-species
team is ``H = E * Q`` with composition entropy ``E`` and Rao's quadratic
entropy ``Q = 2 p_r p_s d_rs^2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .world import ConfigError, Strategy

# Behavior-tree actions and their complexity scores.
ACTION_SCORES: dict[str, float] = {
    "A0": 0.5,  # stop at short-range target
    "A1": 1.0,  # transmit beacon
    "A2": 1.5,  # pick up target
    "A3": 2.0,  # deliver to collection point
    "A4": 1.0,  # approach long-range target
    "A5": 0.5,  # collision avoidance
    "A6": 0.5,  # beacon approach, searchers only
    "A7": 1.0,  # beacon approach, any host
    "A8": 1.0,  # random walk
}

SEARCHER_ACTIONS = ("A0", "A1", "A4", "A5", "A7", "A8")
RESCUER_ACTIONS = {
    Strategy.S1: ("A2", "A3", "A4", "A5", "A7", "A8"),
    Strategy.S2: ("A2", "A3", "A4", "A5", "A6", "A8"),
    Strategy.S3: ("A2", "A3", "A5", "A6", "A8"),
}
# every action once, with only the richer of the two beacon-approach variants
MAX_SCORE = 8.5


@dataclass(frozen=True)
class BehaviorProfile:
    actions: frozenset[str]
    scores: Mapping[str, float] = field(default_factory=lambda: dict(ACTION_SCORES))

    def __post_init__(self):
        missing = [a for a in self.actions if a not in self.scores]
        if missing:
            raise ConfigError(f"actions without a score: {sorted(missing)}")
        if any(self.scores[a] < 0 for a in self.actions):
            raise ConfigError("action scores must be non-negative")


@dataclass(frozen=True)
class ProfileTable:
    scores: Mapping[str, float]
    searcher: tuple[str, ...]
    rescuer: Mapping[Strategy, tuple[str, ...]]
    max_score: float

    def profiles(self, strategy) -> tuple[BehaviorProfile, BehaviorProfile, float]:
        strategy = Strategy.parse(strategy)
        return (
            BehaviorProfile(frozenset(self.searcher), self.scores),
            BehaviorProfile(frozenset(self.rescuer[strategy]), self.scores),
            self.max_score,
        )


DEFAULT_TABLE = ProfileTable(ACTION_SCORES, SEARCHER_ACTIONS, RESCUER_ACTIONS, MAX_SCORE)


@dataclass(frozen=True)
class CompositionPoint:
    n_r: int
    n_s: int
    strategy: Strategy = Strategy.S1

    def __post_init__(self):
        if self.n_r < 0 or self.n_s < 0 or self.n_r + self.n_s < 1:
            raise ConfigError(f"composition needs at least one agent, got ({self.n_r}, {self.n_s})")


def load_profiles(path: str | Path) -> ProfileTable:
    """Read an alternate scoring from JSON.

    Expected keys: ``scores`` (action -> score), ``searcher`` (action list),
    ``rescuer`` (strategy number -> action list) and optional ``max_score``,
    which defaults to the sum of all listed scores.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        scores = {str(k): float(v) for k, v in raw["scores"].items()}
        searcher = tuple(raw["searcher"])
        rescuer = {Strategy.parse(k): tuple(v) for k, v in raw["rescuer"].items()}
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        raise ConfigError(f"cannot read behavior profiles from {path}: {exc}") from exc
    if set(rescuer) != set(Strategy):
        raise ConfigError(f"{path}: rescuer profiles needed for strategies 1, 2 and 3")
    max_score = float(raw.get("max_score", sum(scores.values())))
    table = ProfileTable(scores, searcher, rescuer, max_score)
    for s in Strategy:
        table.profiles(s)  # validates every profile against the score table
    return table


def default_profiles(strategy, table: ProfileTable = DEFAULT_TABLE):
    """``(searcher, rescuer, max_score)`` for ``strategy``."""
    return table.profiles(strategy)


def species_score(profile: BehaviorProfile) -> float:
    return sum(profile.scores[a] for a in sorted(profile.actions))


def interspecies_distance(a: BehaviorProfile, b: BehaviorProfile, max_score: float) -> float:
    if not max_score > 0:
        raise ConfigError(f"max_score must be positive, got {max_score}")
    return abs(species_score(a) - species_score(b)) / max_score


def _fractions(n_r: int, n_s: int) -> tuple[float, float]:
    if n_r < 0 or n_s < 0 or n_r + n_s < 1:
        raise ConfigError(f"composition needs at least one agent, got ({n_r}, {n_s})")
    n = n_r + n_s
    return n_r / n, n_s / n


def entropy(n_r: int, n_s: int) -> float:
    """Natural-log composition entropy, with 0 log 0 = 0."""
    return 0.0 - sum(p * math.log(p) for p in _fractions(n_r, n_s) if p > 0)


def raos_q(n_r: int, n_s: int, d_rs: float) -> float:
    if d_rs < 0:
        raise ConfigError("inter-species distance must be non-negative")
    p_r, p_s = _fractions(n_r, n_s)
    return 2.0 * p_r * p_s * d_rs * d_rs


def heterogeneity_measure(point: CompositionPoint, table: ProfileTable = DEFAULT_TABLE) -> tuple[float, float, float]:
    """``(E, Q, H)`` for a team composition under the given scoring."""
    searcher, rescuer, max_score = default_profiles(point.strategy, table)
    d = interspecies_distance(rescuer, searcher, max_score)
    e = entropy(point.n_r, point.n_s)
    q = raos_q(point.n_r, point.n_s, d)
    return e, q, e * q
