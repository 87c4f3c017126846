import pytest

from sarswarm.config import RunConfig, dump_config, load_config, parse_pairs
from sarswarm.world import ConfigError, Vec2


def test_defaults_reproduce_reference_setup():
    cfg = RunConfig()
    assert cfg.n_targets == 250 and cfg.arena().n_collection == 4
    assert cfg.trials == 10 and cfg.iterations * cfg.dt == pytest.approx(300)
    assert cfg.tau_threshold() == 158
    assert cfg.arena().collection_points[3].center == Vec2(87.5, 87.5)


def test_load_file_and_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nn_targets = 100\n\nd_c = 30  # wider comms\ncross_kind_collisions = yes\n")
    cfg = load_config(p, {"trials": "3"})
    assert cfg.n_targets == 100 and cfg.d_c == 30.0 and cfg.cross_kind_collisions
    assert cfg.trials == 3 and cfg.tau_threshold() == 63
    assert cfg.sensors().d_c == 30.0


def test_unknown_key_rejected(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("n_robots = 4\n")
    with pytest.raises(ConfigError, match="n_robots"):
        load_config(p)


@pytest.mark.parametrize(
    "pairs",
    [{"d_ts": "1.0"}, {"d_cl": "x"}, {"trials": "0"}, {"cross_kind_collisions": "maybe"},
     {"collection_centers": "1;2"}, {"rescuer_zone": "1,2,3"}, {"record_stride": "0"}],
)
def test_invalid_values(pairs):
    with pytest.raises(ConfigError):
        load_config(None, pairs)


def test_parse_pairs_errors():
    with pytest.raises(ConfigError, match="cfg:2"):
        parse_pairs(["a = 1", "oops"], "cfg")


def test_dump_roundtrip(tmp_path):
    cfg = RunConfig().with_overrides({"width": "120", "cross_kind_collisions": "true"})
    p = tmp_path / "dump.cfg"
    p.write_text(dump_config(cfg))
    assert load_config(p) == cfg


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/run.cfg")
