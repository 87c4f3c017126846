"""Collision, short-range, long-range and communication sensors.

Every query is a pure read of a :class:`~sarswarm.world.World` snapshot.
Range tests compare squared distances against squared ranges (closed discs),
and nearest-entity ties break by lowest index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .world import NO_TARGET, SEARCHER, Vec2, World

ZERO = Vec2(0.0, 0.0)


@dataclass(frozen=True)
class SensorReading:
    p_cl: int = 0
    v_cl: Vec2 = ZERO
    p_ts: int = 0
    nearest_short_target: int | None = None
    p_tl: int = 0
    v_t: Vec2 = ZERO
    p_c: int = 0
    v_c: Vec2 = ZERO
    transmitter: int | None = None


def collision_sense(world: World, i: int) -> tuple[int, Vec2]:
    """Resultant of ``H_j - H_i`` over agents and nearest wall points within ``d_cl``."""
    r2 = world.sensors.d_cl * world.sensors.d_cl
    xi, yi = float(world.pos[i, 0]), float(world.pos[i, 1])
    dx = world.pos[:, 0] - xi
    dy = world.pos[:, 1] - yi
    near = dx * dx + dy * dy <= r2
    near[i] = False
    if not world.sensors.cross_kind_collisions:
        near &= world.kind == world.kind[i]

    hit = False
    vx = vy = 0.0
    for j in np.flatnonzero(near):
        vx += float(dx[j])
        vy += float(dy[j])
        hit = True

    d_cl = world.sensors.d_cl
    w, h = world.arena.width, world.arena.height
    # walls act like agents located at the nearest wall point
    if xi <= d_cl:
        vx += 0.0 - xi
        hit = True
    if w - xi <= d_cl:
        vx += w - xi
        hit = True
    if yi <= d_cl:
        vy += 0.0 - yi
        hit = True
    if h - yi <= d_cl:
        vy += h - yi
        hit = True

    if not hit:
        return 0, ZERO
    return 1, Vec2(vx, vy)


def nearest_target(world: World, i: int) -> tuple[int | None, float]:
    """Closest alive ground target and its squared distance."""
    alive = np.flatnonzero(world.target_alive)
    if alive.size == 0:
        return None, float("inf")
    dx = world.target_pos[alive, 0] - world.pos[i, 0]
    dy = world.target_pos[alive, 1] - world.pos[i, 1]
    d2 = dx * dx + dy * dy
    k = int(np.argmin(d2))
    return int(alive[k]), float(d2[k])


def short_range_sense(world: World, i: int) -> tuple[int, int | None]:
    """Presence flag and id of the nearest target within ``d_ts``; no vector."""
    t, d2 = nearest_target(world, i)
    if t is not None and d2 <= world.sensors.d_ts * world.sensors.d_ts:
        return 1, t
    return 0, None


def long_range_sense(world: World, i: int, enabled: bool = True) -> tuple[int, Vec2]:
    """Vector to the nearest target within ``d_tl``, suppressed by a short-range hit."""
    if not enabled:
        return 0, ZERO
    t, d2 = nearest_target(world, i)
    s = world.sensors
    if t is None or d2 <= s.d_ts * s.d_ts or d2 > s.d_tl * s.d_tl:
        return 0, ZERO
    return 1, Vec2(
        float(world.target_pos[t, 0] - world.pos[i, 0]),
        float(world.target_pos[t, 1] - world.pos[i, 1]),
    )


def is_transmitting(kind: int, p_ts: int, p_tl: int) -> bool:
    """Beacon rule: a long-range detection, or a searcher parked at a target."""
    return bool(p_tl) or (kind == SEARCHER and bool(p_ts))


def long_range_enabled(world: World, i: int) -> bool:
    """Strategy permission, and never while carrying (delivery takes priority)."""
    if world.carrying[i] != NO_TARGET:
        return False
    return world.kind[i] == SEARCHER or world.strategy.rescuer_long_range


def transmitting_mask(world: World) -> np.ndarray:
    out = np.zeros(world.n_agents, dtype=bool)
    for j in range(world.n_agents):
        p_ts, _ = short_range_sense(world, j)
        p_tl, _ = long_range_sense(world, j, long_range_enabled(world, j))
        out[j] = is_transmitting(int(world.kind[j]), p_ts, p_tl)
    return out


def comm_sense(
    world: World,
    i: int,
    hosts: np.ndarray,
    transmitting: np.ndarray | None = None,
    *,
    p_ts: int | None = None,
    p_tl: int | None = None,
) -> tuple[int, Vec2, int | None]:
    """Vector to the nearest transmitting host within ``d_c``.

    ``hosts`` is a boolean mask over agents. Only an empty agent with no target
    of its own in view may receive. Returns ``(p_c, v_c, transmitter_id)``.
    """
    if p_ts is None:
        p_ts, _ = short_range_sense(world, i)
    if p_tl is None:
        p_tl, _ = long_range_sense(world, i, long_range_enabled(world, i))
    if p_ts or p_tl or world.carrying[i] != NO_TARGET:
        return 0, ZERO, None
    if transmitting is None:
        transmitting = transmitting_mask(world)

    cand = np.asarray(hosts, dtype=bool) & transmitting
    cand[i] = False
    idx = np.flatnonzero(cand)
    if idx.size == 0:
        return 0, ZERO, None
    dx = world.pos[idx, 0] - world.pos[i, 0]
    dy = world.pos[idx, 1] - world.pos[i, 1]
    d2 = dx * dx + dy * dy
    k = int(np.argmin(d2))
    if d2[k] > world.sensors.d_c * world.sensors.d_c:
        return 0, ZERO, None
    return 1, Vec2(float(dx[k]), float(dy[k])), int(idx[k])
