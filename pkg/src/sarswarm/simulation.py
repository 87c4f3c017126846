"""Synchronous tick update and full trials.

Each tick senses every agent against the pre-tick snapshot, computes all
controls, then applies movement, pickups and deliveries in one ordered pass.

Two interchangeable backends advance the world: the compiled kernel in
``sarswarm._kernel`` and the pure-Python step below. They produce
bit-identical worlds. Set ``SARSWARM_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .behavior import agent_control, read_sensors
from .sensors import transmitting_mask
from .world import (
    NO_TARGET,
    RESCUER,
    WALL_MARGIN,
    ArenaConfig,
    ConfigError,
    SensorConfig,
    Strategy,
    World,
    build_world,
    inside_collection,
)

try:
    from . import _kernel
except ImportError:  # pragma: no cover - exercised when the extension is not built
    _kernel = None

BACKENDS = ("compiled", "python")


def default_backend() -> str:
    wanted = os.environ.get("SARSWARM_BACKEND", "").strip().lower()
    if wanted == "python" or _kernel is None:
        return "python"
    return "compiled"


def compiled_available() -> bool:
    return _kernel is not None


@dataclass(frozen=True)
class TrialConfig:
    iterations: int = 15000
    record_stride: int = 10
    rw_persistence: int = 50
    layout_seed: int = 0
    agent_seed: int = 0
    walk_seed: int = 0

    def validate(self) -> None:
        if self.iterations < 0:
            raise ConfigError("iterations must be >= 0")
        if self.record_stride < 1:
            raise ConfigError("record_stride must be >= 1")
        if self.rw_persistence < 1:
            raise ConfigError("rw_persistence must be >= 1")


@dataclass
class TrialRecord:
    """Retrieval history of one trial.

    ``series`` holds ``(iteration, retrieved)`` every ``record_stride`` ticks
    plus the final tick. ``first_reach[k]`` is the first iteration at which the
    retrieved count reached ``k`` (-1 if never), at full tick resolution.
    """

    series: list[tuple[int, int]]
    first_reach: np.ndarray
    iterations: int
    pickups: int = 0
    n_r: int = 0
    n_s: int = 0
    strategy: int = 1
    seeds: tuple[int, int, int] = (0, 0, 0)
    dt: float = 0.02
    meta: dict = field(default_factory=dict)

    @property
    def final_retrieved(self) -> int:
        return self.series[-1][1]

    @classmethod
    def from_counts(cls, counts, stride: int = 10, n_targets: int | None = None, **kw) -> "TrialRecord":
        """Build a record from the per-tick retrieved counter ``counts[0..N]``."""
        counts = np.asarray(counts, dtype=np.int64)
        n = len(counts) - 1
        ticks = list(range(0, n + 1, stride))
        if ticks[-1] != n:
            ticks.append(n)
        series = [(t, int(counts[t])) for t in ticks]
        top = int(counts.max()) if n_targets is None else n_targets
        first = np.full(top + 1, -1, dtype=np.int64)
        # counts is monotone, so searchsorted gives the first tick at each level
        levels = np.arange(top + 1)
        idx = np.searchsorted(counts, levels, side="left")
        reached = idx <= n
        first[reached] = idx[reached]
        return cls(series=series, first_reach=first, iterations=n, **kw)


def _step_python(world: World) -> None:
    n = world.n_agents
    transmitting = transmitting_mask(world)
    readings = [read_sensors(world, i, transmitting) for i in range(n)]
    controls = [agent_control(world, i, transmitting, readings[i])[0] for i in range(n)]

    w, h, dt = world.arena.width, world.arena.height, world.sensors.dt
    lo, hx, hy = WALL_MARGIN, w - WALL_MARGIN, h - WALL_MARGIN
    for i, out in enumerate(controls):
        vx, vy = out.velocity
        world.velocity[i] = vx, vy
        world.state[i] = int(out.new_state)
        x = float(world.pos[i, 0]) + vx * dt
        y = float(world.pos[i, 1]) + vy * dt
        world.pos[i, 0] = min(max(x, lo), hx)
        world.pos[i, 1] = min(max(y, lo), hy)

    for i, r in enumerate(readings):
        if world.kind[i] != RESCUER or world.carrying[i] != NO_TARGET or not r.p_ts:
            continue
        t = r.nearest_short_target
        if world.target_alive[t]:
            world.target_alive[t] = 0
            world.carrying[i] = t
            world.pickups += 1

    for i in range(n):
        if world.carrying[i] != NO_TARGET and inside_collection(world, world.pos[i]):
            world.carrying[i] = NO_TARGET
            world.retrieved += 1

    world.iteration += 1


def _run_compiled(world: World, n_ticks: int, counts: np.ndarray) -> None:
    s = world.sensors
    retrieved, pickups = _kernel.run_ticks(
        world.kind, world.pos, world.carrying, world.rw_heading, world.rw_ticks_left,
        world.rng_state, world.state, world.velocity, world.target_pos, world.target_alive,
        world.collection_centers, world.collection_half_sides,
        world.arena.width, world.arena.height,
        s.d_cl, s.d_ts, s.d_tl, s.d_c, s.max_speed, s.dt, WALL_MARGIN,
        world.rw_persistence, s.cross_kind_collisions,
        world.strategy.rescuer_listens_to_rescuers,
        world.strategy.rescuer_long_range,
        n_ticks, world.retrieved, world.pickups, counts,
    )
    world.retrieved = retrieved
    world.pickups = pickups
    world.iteration += n_ticks


def step_world(world: World, backend: str | None = None) -> World:
    """Advance ``world`` by one tick in place and return it."""
    advance(world, 1, backend)
    return world


def advance(world: World, n_ticks: int, backend: str | None = None) -> np.ndarray:
    """Run ``n_ticks`` ticks; returns the retrieved count after each tick."""
    backend = backend or default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    counts = np.zeros(n_ticks, dtype=np.int32)
    if n_ticks == 0:
        return counts
    if backend == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled kernel is not built; reinstall the package or use backend='python'")
        _run_compiled(world, n_ticks, counts)
    else:
        for k in range(n_ticks):
            _step_python(world)
            counts[k] = world.retrieved
    return counts


def run_trial(
    arena: ArenaConfig,
    sensors: SensorConfig,
    n_r: int,
    n_s: int,
    strategy: Strategy | int,
    trial_config: TrialConfig = TrialConfig(),
    backend: str | None = None,
) -> TrialRecord:
    trial_config.validate()
    strategy = Strategy.parse(strategy)
    world = build_world(
        arena, sensors, n_r, n_s, strategy,
        layout_seed=trial_config.layout_seed,
        agent_seed=trial_config.agent_seed,
        walk_seed=trial_config.walk_seed,
        rw_persistence=trial_config.rw_persistence,
    )
    counts = np.empty(trial_config.iterations + 1, dtype=np.int32)
    counts[0] = world.retrieved
    counts[1:] = advance(world, trial_config.iterations, backend)
    return TrialRecord.from_counts(
        counts,
        stride=trial_config.record_stride,
        n_targets=arena.n_targets,
        pickups=world.pickups,
        n_r=n_r,
        n_s=n_s,
        strategy=int(strategy),
        seeds=(trial_config.layout_seed, trial_config.agent_seed, trial_config.walk_seed),
        dt=sensors.dt,
    )
