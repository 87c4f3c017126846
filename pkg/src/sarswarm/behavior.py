"""Motion controller and rescuer strategies.

The controller sums the attraction terms, gates them off during a collision
and subtracts the collision resultant::

    V_con = (v_t + v_c + v_p + v_r) * (1 - p_cl) - v_cl

then scales ``V_con`` to ``max_speed``. A zero ``V_con`` gives zero velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import rng as _rng
from .sensors import (
    ZERO,
    SensorReading,
    collision_sense,
    comm_sense,
    long_range_enabled,
    long_range_sense,
    short_range_sense,
    transmitting_mask,
)
from .world import NO_TARGET, RESCUER, SEARCHER, Strategy, Vec2, World, nearest_collection_point


class AgentMode(IntEnum):
    RANDOM_WALK = 0
    LONG_RANGE = 1
    BEACON = 2
    STOPPED = 3
    RETRIEVAL = 4


@dataclass(frozen=True)
class ControlOutput:
    velocity: Vec2
    new_state: AgentMode


def acceptable_hosts(strategy: Strategy, agent_kind: int, world: World, agent: int | None = None) -> np.ndarray:
    """Boolean mask of agents this agent will listen to.

    Rescuers under strategies 2 and 3 only hear searchers.
    """
    if agent_kind == RESCUER and not Strategy.parse(strategy).rescuer_listens_to_rescuers:
        mask = world.kind == SEARCHER
    else:
        mask = np.ones(world.n_agents, dtype=bool)
    if agent is not None:
        mask[agent] = False
    return mask


def random_walk_vector(world: World, i: int, reading: SensorReading) -> Vec2:
    """Persistent random heading, re-drawn every ``rw_persistence`` ticks.

    Any active sensor or a carried target zeroes the walk and discards the
    current heading, so the next walking tick starts with a fresh draw.
    Advances agent ``i``'s private stream; mutates its walk state.
    """
    busy = reading.p_ts or reading.p_tl or reading.p_c or reading.p_cl
    if busy or world.carrying[i] != NO_TARGET:
        world.rw_ticks_left[i] = 0
        return ZERO
    if world.rw_ticks_left[i] == 0:
        state, vx, vy = _rng.draw_heading(int(world.rng_state[i]))
        world.rng_state[i] = np.uint64(state)
        world.rw_heading[i] = vx, vy
        world.rw_ticks_left[i] = world.rw_persistence
    world.rw_ticks_left[i] -= 1
    return Vec2(float(world.rw_heading[i, 0]), float(world.rw_heading[i, 1]))


def retrieval_vector(world: World, i: int) -> Vec2:
    if world.kind[i] != RESCUER or world.carrying[i] == NO_TARGET:
        return ZERO
    c, _ = nearest_collection_point(world, world.pos[i])
    return Vec2(c.x - float(world.pos[i, 0]), c.y - float(world.pos[i, 1]))


def control_vector(
    reading: SensorReading,
    v_r: Vec2,
    v_p: Vec2,
    max_speed: float,
    *,
    kind: int = SEARCHER,
    carrying: bool = False,
) -> ControlOutput:
    gate = 1.0 - reading.p_cl
    vx = (reading.v_t.x + reading.v_c.x + v_p.x + v_r.x) * gate - reading.v_cl.x
    vy = (reading.v_t.y + reading.v_c.y + v_p.y + v_r.y) * gate - reading.v_cl.y
    norm = math.sqrt(vx * vx + vy * vy)
    velocity = ZERO if norm == 0.0 else Vec2(vx / norm * max_speed, vy / norm * max_speed)

    if carrying:
        mode = AgentMode.RETRIEVAL
    elif reading.p_ts and kind == SEARCHER:
        mode = AgentMode.STOPPED
    elif reading.p_c:
        mode = AgentMode.BEACON
    elif reading.p_tl:
        mode = AgentMode.LONG_RANGE
    else:
        mode = AgentMode.RANDOM_WALK
    return ControlOutput(velocity, mode)


def read_sensors(world: World, i: int, transmitting: np.ndarray | None = None) -> SensorReading:
    """Full sensor reading for agent ``i`` against the current snapshot."""
    p_cl, v_cl = collision_sense(world, i)
    p_ts, short_id = short_range_sense(world, i)
    p_tl, v_t = long_range_sense(world, i, long_range_enabled(world, i))
    hosts = acceptable_hosts(world.strategy, int(world.kind[i]), world, i)
    p_c, v_c, tx = comm_sense(world, i, hosts, transmitting, p_ts=p_ts, p_tl=p_tl)
    return SensorReading(p_cl, v_cl, p_ts, short_id, p_tl, v_t, p_c, v_c, tx)


def agent_control(
    world: World,
    i: int,
    transmitting: np.ndarray | None = None,
    reading: SensorReading | None = None,
) -> tuple[ControlOutput, SensorReading]:
    """Sense, then compose the control command for one agent."""
    if transmitting is None:
        transmitting = transmitting_mask(world)
    if reading is None:
        reading = read_sensors(world, i, transmitting)
    v_r = random_walk_vector(world, i, reading)
    v_p = retrieval_vector(world, i)
    out = control_vector(
        reading,
        v_r,
        v_p,
        world.sensors.max_speed,
        kind=int(world.kind[i]),
        carrying=world.carrying[i] != NO_TARGET,
    )
    return out, reading
