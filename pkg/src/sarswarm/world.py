"""Arena, sensor configuration and reproducible initial worlds.

All mutable simulation state lives in flat numpy arrays on :class:`World` so
the compiled kernel and the Python step can share it without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

import numpy as np

SEARCHER = 0
RESCUER = 1

NO_TARGET = -1

# agents are clamped this far inside the walls so a wall contact always has a
# non-zero avoidance vector
WALL_MARGIN = 1e-6


class ConfigError(ValueError):
    """Raised for an invalid arena, sensor or trial configuration."""


class Vec2(NamedTuple):
    x: float
    y: float


class Strategy(IntEnum):
    """Rescuer capability profile."""

    S1 = 1  # full sensors, listens to everyone
    S2 = 2  # selfish: listens to searchers only
    S3 = 3  # selfish and blind to long-range targets

    @property
    def rescuer_listens_to_rescuers(self) -> bool:
        return self is Strategy.S1

    @property
    def rescuer_long_range(self) -> bool:
        return self is not Strategy.S3

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, Strategy):
            return value
        text = str(value).strip().upper().removeprefix("STRATEGY").removeprefix("S")
        try:
            return cls(int(text))
        except (ValueError, KeyError):
            raise ConfigError(f"unknown strategy {value!r}; expected 1, 2 or 3") from None


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def area(self) -> float:
        return max(self.x1 - self.x0, 0.0) * max(self.y1 - self.y0, 0.0)

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class CollectionSquare:
    center: Vec2
    half_side: float

    @property
    def rect(self) -> Rect:
        c, h = self.center, self.half_side
        return Rect(c.x - h, c.y - h, c.x + h, c.y + h)


def _default_collection() -> tuple[CollectionSquare, ...]:
    centers = [(12.5, 12.5), (12.5, 87.5), (87.5, 12.5), (87.5, 87.5)]
    return tuple(CollectionSquare(Vec2(x, y), 4.0) for x, y in centers)


@dataclass(frozen=True)
class ArenaConfig:
    width: float = 100.0
    height: float = 100.0
    collection_points: tuple[CollectionSquare, ...] = field(default_factory=_default_collection)
    rescuer_init_zone: Rect = Rect(85.0, 85.0, 100.0, 100.0)
    n_targets: int = 250

    @property
    def n_collection(self) -> int:
        return len(self.collection_points)

    def validate(self) -> None:
        if not (self.width > 0 and self.height > 0) or not (
            math.isfinite(self.width) and math.isfinite(self.height)
        ):
            raise ConfigError(f"arena must have positive finite size, got {self.width}x{self.height}")
        if self.n_targets < 0:
            raise ConfigError("n_targets must be non-negative")
        if not self.collection_points:
            raise ConfigError("arena needs at least one collection point")
        for i, sq in enumerate(self.collection_points):
            r = sq.rect
            if sq.half_side <= 0 or r.x0 < 0 or r.y0 < 0 or r.x1 > self.width or r.y1 > self.height:
                raise ConfigError(f"collection square {i} does not lie inside the arena")
        z = self.rescuer_init_zone
        if z.area <= 0:
            raise ConfigError("rescuer init zone has zero area")
        if z.x0 < 0 or z.y0 < 0 or z.x1 > self.width or z.y1 > self.height:
            raise ConfigError("rescuer init zone must lie inside the arena")


@dataclass(frozen=True)
class SensorConfig:
    d_cl: float = 1.5
    d_ts: float = 3.0
    d_tl: float = 10.0
    d_c: float = 25.0
    max_speed: float = 10.0
    dt: float = 0.02
    # searchers and rescuers steer around each other only if set
    cross_kind_collisions: bool = False

    def validate(self) -> None:
        values = (self.d_cl, self.d_ts, self.d_tl, self.d_c, self.max_speed, self.dt)
        if not all(math.isfinite(v) and v > 0 for v in values):
            raise ConfigError("sensor ranges, max_speed and dt must be positive and finite")
        if not (self.d_cl < self.d_ts < self.d_tl < self.d_c):
            raise ConfigError(
                "sensor ranges must satisfy d_cl < d_ts < d_tl < d_c, got "
                f"{self.d_cl}, {self.d_ts}, {self.d_tl}, {self.d_c}"
            )


@dataclass(frozen=True)
class AgentState:
    id: int
    kind: int
    position: Vec2
    carrying: int | None
    rw_heading: Vec2
    rw_ticks_left: int

    @property
    def is_rescuer(self) -> bool:
        return self.kind == RESCUER


@dataclass
class World:
    """Complete simulation state.

    Agents are stored rescuers first (ids ``0..n_r-1``) then searchers, so the
    lowest-id tie-break favours rescuers when contested.
    """

    arena: ArenaConfig
    sensors: SensorConfig
    strategy: Strategy
    kind: np.ndarray  # int8 (n,)
    pos: np.ndarray  # float64 (n, 2)
    carrying: np.ndarray  # int32 (n,), NO_TARGET when empty
    rw_heading: np.ndarray  # float64 (n, 2)
    rw_ticks_left: np.ndarray  # int32 (n,)
    rng_state: np.ndarray  # uint64 (n,), one random-walk stream per agent
    state: np.ndarray  # int8 (n,), last controller state
    velocity: np.ndarray  # float64 (n, 2), last commanded velocity
    target_pos: np.ndarray  # float64 (n_t, 2)
    target_alive: np.ndarray  # uint8 (n_t,)
    rw_persistence: int = 50
    retrieved: int = 0
    iteration: int = 0
    pickups: int = 0

    @property
    def n_agents(self) -> int:
        return len(self.kind)

    @property
    def agents(self) -> list[AgentState]:
        return [self.agent(i) for i in range(self.n_agents)]

    def agent(self, i: int) -> AgentState:
        c = int(self.carrying[i])
        return AgentState(
            id=i,
            kind=int(self.kind[i]),
            position=Vec2(float(self.pos[i, 0]), float(self.pos[i, 1])),
            carrying=None if c == NO_TARGET else c,
            rw_heading=Vec2(float(self.rw_heading[i, 0]), float(self.rw_heading[i, 1])),
            rw_ticks_left=int(self.rw_ticks_left[i]),
        )

    @property
    def collection_centers(self) -> np.ndarray:
        return np.array([[sq.center.x, sq.center.y] for sq in self.arena.collection_points], dtype=float)

    @property
    def collection_half_sides(self) -> np.ndarray:
        return np.array([sq.half_side for sq in self.arena.collection_points], dtype=float)

    def n_alive(self) -> int:
        return int(self.target_alive.sum())

    def n_carried(self) -> int:
        return int((self.carrying != NO_TARGET).sum())

    def conserved(self) -> bool:
        return self.n_alive() + self.n_carried() + self.retrieved == self.arena.n_targets

    def copy(self) -> "World":
        arrays = {
            name: getattr(self, name).copy()
            for name in (
                "kind", "pos", "carrying", "rw_heading", "rw_ticks_left",
                "rng_state", "state", "velocity", "target_pos", "target_alive",
            )
        }
        return World(
            arena=self.arena,
            sensors=self.sensors,
            strategy=self.strategy,
            rw_persistence=self.rw_persistence,
            retrieved=self.retrieved,
            iteration=self.iteration,
            pickups=self.pickups,
            **arrays,
        )


def layout_targets(arena: ArenaConfig, layout_seed: int) -> np.ndarray:
    """Uniform target layout outside every collection square.

    Depends only on the arena and ``layout_seed``, never on team makeup.
    """
    rng = np.random.default_rng(np.random.SeedSequence(layout_seed))
    rects = [sq.rect for sq in arena.collection_points]
    out = np.empty((arena.n_targets, 2))
    k = 0
    while k < arena.n_targets:
        x = rng.uniform(0.0, arena.width)
        y = rng.uniform(0.0, arena.height)
        if any(r.contains(x, y) for r in rects):
            continue
        out[k] = x, y
        k += 1
    return out


def build_world(
    arena: ArenaConfig,
    sensors: SensorConfig,
    n_r: int,
    n_s: int,
    strategy: Strategy | int,
    layout_seed: int,
    agent_seed: int,
    walk_seed: int | None = None,
    rw_persistence: int = 50,
) -> World:
    """Construct the initial world for one trial.

    Searchers are placed uniformly over the arena and rescuers uniformly in the
    rescuer init zone, both from ``agent_seed``. Random-walk streams come from
    ``walk_seed`` (defaults to ``agent_seed``).
    """
    arena.validate()
    sensors.validate()
    strategy = Strategy.parse(strategy)
    if n_r < 0 or n_s < 0 or n_r + n_s < 1:
        raise ConfigError(f"need at least one agent, got n_r={n_r}, n_s={n_s}")
    if rw_persistence < 1:
        raise ConfigError("rw_persistence must be >= 1")

    targets = layout_targets(arena, layout_seed)

    n = n_r + n_s
    rng = np.random.default_rng(np.random.SeedSequence(agent_seed))
    z = arena.rescuer_init_zone
    pos = np.empty((n, 2))
    pos[:n_r, 0] = rng.uniform(z.x0, z.x1, n_r)
    pos[:n_r, 1] = rng.uniform(z.y0, z.y1, n_r)
    pos[n_r:, 0] = rng.uniform(0.0, arena.width, n_s)
    pos[n_r:, 1] = rng.uniform(0.0, arena.height, n_s)

    kind = np.full(n, SEARCHER, dtype=np.int8)
    kind[:n_r] = RESCUER

    seed = agent_seed if walk_seed is None else walk_seed
    streams = np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)

    return World(
        arena=arena,
        sensors=sensors,
        strategy=strategy,
        kind=kind,
        pos=pos,
        carrying=np.full(n, NO_TARGET, dtype=np.int32),
        rw_heading=np.zeros((n, 2)),
        rw_ticks_left=np.zeros(n, dtype=np.int32),
        rng_state=streams.astype(np.uint64),
        state=np.zeros(n, dtype=np.int8),
        velocity=np.zeros((n, 2)),
        target_pos=targets,
        target_alive=np.ones(arena.n_targets, dtype=np.uint8),
        rw_persistence=rw_persistence,
    )


def nearest_collection_point(world: World, p) -> tuple[Vec2, float]:
    """Nearest collection center to ``p``; ties go to the lowest index."""
    best, best_d2 = 0, math.inf
    for j, sq in enumerate(world.arena.collection_points):
        dx = sq.center.x - p[0]
        dy = sq.center.y - p[1]
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best, best_d2 = j, d2
    return world.arena.collection_points[best].center, math.sqrt(best_d2)


def inside_collection(world: World, p) -> bool:
    return any(sq.rect.contains(p[0], p[1]) for sq in world.arena.collection_points)
