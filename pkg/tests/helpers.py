"""Hand-built worlds for sensor and controller tests."""

import numpy as np

from sarswarm.world import NO_TARGET, ArenaConfig, SensorConfig, Strategy, World


def make_world(agents, targets=(), strategy=1, sensors=None, arena=None, carrying=None, seed=0):
    """``agents`` is a list of ``(kind, x, y)``; ``targets`` a list of ``(x, y)``."""
    arena = arena or ArenaConfig(n_targets=len(targets))
    if arena.n_targets != len(targets):
        arena = ArenaConfig(arena.width, arena.height, arena.collection_points, arena.rescuer_init_zone, len(targets))
    n = len(agents)
    kind = np.array([a[0] for a in agents], dtype=np.int8)
    pos = np.array([[a[1], a[2]] for a in agents], dtype=float).reshape(n, 2)
    carry = np.full(n, NO_TARGET, dtype=np.int32)
    for i, t in (carrying or {}).items():
        carry[i] = t
    tpos = np.array(targets, dtype=float).reshape(len(targets), 2)
    alive = np.ones(len(targets), dtype=np.uint8)
    for t in carry[carry != NO_TARGET]:
        alive[t] = 0
    return World(
        arena=arena,
        sensors=sensors or SensorConfig(),
        strategy=Strategy(strategy),
        kind=kind,
        pos=pos,
        carrying=carry,
        rw_heading=np.zeros((n, 2)),
        rw_ticks_left=np.zeros(n, dtype=np.int32),
        rng_state=np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64),
        state=np.zeros(n, dtype=np.int8),
        velocity=np.zeros((n, 2)),
        target_pos=tpos,
        target_alive=alive,
    )


def world_arrays(world):
    return {
        name: getattr(world, name).copy()
        for name in ("pos", "carrying", "rw_heading", "rw_ticks_left", "rng_state", "state",
                     "velocity", "target_alive")
    }
