import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sarswarm.world import (
    RESCUER,
    SEARCHER,
    ArenaConfig,
    CollectionSquare,
    ConfigError,
    Rect,
    SensorConfig,
    Strategy,
    Vec2,
    build_world,
    inside_collection,
    layout_targets,
    nearest_collection_point,
)

seeds = st.integers(0, 2**32 - 1)


def default_world(n_r=5, n_s=5, **kw):
    kw.setdefault("layout_seed", 1)
    kw.setdefault("agent_seed", 2)
    return build_world(ArenaConfig(), SensorConfig(), n_r, n_s, Strategy.S1, **kw)


def test_default_arena_has_250_alive_targets():
    w = default_world()
    assert w.arena.n_targets == 250
    assert w.n_alive() == 250
    assert w.retrieved == 0 and w.iteration == 0
    assert w.arena.n_collection == 4


def test_rescuer_only_team_starts_in_init_zone():
    w = default_world(25, 0)
    assert w.n_agents == 25
    assert (w.kind == RESCUER).all()
    z = w.arena.rescuer_init_zone
    assert all(z.contains(x, y) for x, y in w.pos)


def test_layout_seed_separated_from_agent_seed():
    a = default_world(layout_seed=7, agent_seed=1)
    b = default_world(layout_seed=7, agent_seed=2)
    assert np.array_equal(a.target_pos, b.target_pos)
    assert not np.array_equal(a.pos, b.pos)


def test_layout_independent_of_team_and_strategy():
    a = build_world(ArenaConfig(), SensorConfig(), 5, 0, Strategy.S1, layout_seed=3, agent_seed=0)
    b = build_world(ArenaConfig(), SensorConfig(), 20, 30, Strategy.S3, layout_seed=3, agent_seed=9)
    assert a.target_pos.tobytes() == b.target_pos.tobytes()


@given(seeds, seeds, st.integers(0, 20), st.integers(0, 20))
def test_build_world_invariants(layout_seed, agent_seed, n_r, n_s):
    if n_r + n_s == 0:
        with pytest.raises(ConfigError):
            build_world(ArenaConfig(), SensorConfig(), n_r, n_s, 1, layout_seed, agent_seed)
        return
    w = build_world(ArenaConfig(), SensorConfig(), n_r, n_s, 1, layout_seed, agent_seed)
    assert w.conserved() and w.n_carried() == 0 and w.retrieved == 0
    assert not any(inside_collection(w, p) for p in w.target_pos)
    assert np.isfinite(w.pos).all() and np.isfinite(w.target_pos).all()
    assert (w.pos >= 0).all() and (w.pos[:, 0] <= 100).all() and (w.pos[:, 1] <= 100).all()
    assert list(w.kind) == [RESCUER] * n_r + [SEARCHER] * n_s


@given(seeds)
def test_layout_is_pure_function_of_seed(seed):
    assert np.array_equal(layout_targets(ArenaConfig(), seed), layout_targets(ArenaConfig(), seed))


def test_agent_state_view():
    w = default_world(2, 1)
    a = w.agent(0)
    assert a.is_rescuer and a.carrying is None
    assert w.agent(2).kind == SEARCHER
    assert len(w.agents) == 3


@pytest.mark.parametrize(
    "sensors",
    [
        SensorConfig(d_cl=3.0, d_ts=3.0),
        SensorConfig(d_tl=30.0),
        SensorConfig(d_cl=0.0),
        SensorConfig(max_speed=-1.0),
        SensorConfig(dt=0.0),
        SensorConfig(d_c=math.inf),
    ],
)
def test_sensor_validation(sensors):
    with pytest.raises(ConfigError):
        sensors.validate()


def test_arena_validation():
    with pytest.raises(ConfigError):
        ArenaConfig(width=0).validate()
    with pytest.raises(ConfigError):
        ArenaConfig(rescuer_init_zone=Rect(90, 90, 90, 100)).validate()
    with pytest.raises(ConfigError):
        ArenaConfig(collection_points=(CollectionSquare(Vec2(2, 2), 4.0),)).validate()
    with pytest.raises(ConfigError):
        ArenaConfig(collection_points=()).validate()
    with pytest.raises(ConfigError):
        ArenaConfig(rescuer_init_zone=Rect(90, 90, 110, 100)).validate()


def test_strategy_parse():
    assert Strategy.parse("2") is Strategy.S2
    assert Strategy.parse("s3") is Strategy.S3
    assert Strategy.parse(1) is Strategy.S1
    with pytest.raises(ConfigError):
        Strategy.parse(9)
    assert not Strategy.S3.rescuer_long_range and Strategy.S2.rescuer_long_range
    assert Strategy.S1.rescuer_listens_to_rescuers and not Strategy.S2.rescuer_listens_to_rescuers


def test_nearest_collection_point():
    w = default_world()
    c, d = nearest_collection_point(w, (12.5, 12.5))
    assert c == Vec2(12.5, 12.5) and d == 0.0
    # equidistant from all four corners: index 0 wins
    c, d = nearest_collection_point(w, (50, 50))
    assert c == w.arena.collection_points[0].center
    brute = [math.hypot(sq.center.x - 50, sq.center.y - 50) for sq in w.arena.collection_points]
    assert d == pytest.approx(min(brute)) and len(set(brute)) == 1
    # equidistant from squares 0 and 1 only
    c, _ = nearest_collection_point(w, (12.5, 50))
    assert c == w.arena.collection_points[0].center
    c, _ = nearest_collection_point(w, (80, 20))
    assert c == Vec2(87.5, 12.5)


def test_inside_collection_closed_boundary():
    w = default_world()
    assert inside_collection(w, (12.5, 12.5))
    assert inside_collection(w, (16.5, 12.5))
    assert inside_collection(w, (8.5, 8.5))
    assert not inside_collection(w, (16.5 + 1e-9, 12.5))
    assert not inside_collection(w, (50, 50))


def test_copy_is_deep():
    w = default_world()
    c = w.copy()
    c.pos[0, 0] = -1
    c.target_alive[0] = 0
    assert w.pos[0, 0] != -1 and w.target_alive[0] == 1
