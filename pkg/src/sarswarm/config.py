"""Flat ``key = value`` run configuration.

Every simulation hyperparameter has a key; the defaults reproduce the
reference setup (250 targets, 4 collection points, 10 trials, 300 s at
0.02 s per iteration). Blank lines and ``#`` comments are ignored, unknown
keys are rejected.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .metrics import default_threshold
from .simulation import TrialConfig
from .world import ArenaConfig, CollectionSquare, ConfigError, Rect, SensorConfig, Vec2

_DEFAULT_CENTERS = "12.5:12.5, 12.5:87.5, 87.5:12.5, 87.5:87.5"


@dataclass(frozen=True)
class RunConfig:
    width: float = 100.0
    height: float = 100.0
    n_targets: int = 250
    collection_centers: str = _DEFAULT_CENTERS
    collection_half_side: float = 4.0
    rescuer_zone: str = "85, 85, 100, 100"
    d_cl: float = 1.5
    d_ts: float = 3.0
    d_tl: float = 10.0
    d_c: float = 25.0
    max_speed: float = 10.0
    dt: float = 0.02
    cross_kind_collisions: bool = False
    iterations: int = 15000
    record_stride: int = 10
    rw_persistence: int = 50
    trials: int = 10
    base_seed: int = 0
    threshold: int = 0  # 0 means 63% of n_targets
    workers: int = 1
    profiles: str = ""  # optional JSON behavior-profile file

    def __post_init__(self):
        self.sensors().validate()
        self.arena().validate()
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.threshold < 0:
            raise ConfigError("threshold must be >= 0")
        TrialConfig(self.iterations, self.record_stride, self.rw_persistence).validate()

    def arena(self) -> ArenaConfig:
        squares = []
        for item in self.collection_centers.split(","):
            try:
                x, y = (float(v) for v in item.split(":"))
            except ValueError:
                raise ConfigError(f"bad collection center {item.strip()!r}; expected x:y") from None
            squares.append(CollectionSquare(Vec2(x, y), self.collection_half_side))
        try:
            zone = Rect(*(float(v) for v in self.rescuer_zone.split(",")))
        except (TypeError, ValueError):
            raise ConfigError(f"bad rescuer_zone {self.rescuer_zone!r}; expected x0, y0, x1, y1") from None
        return ArenaConfig(self.width, self.height, tuple(squares), zone, self.n_targets)

    def sensors(self) -> SensorConfig:
        return SensorConfig(
            self.d_cl, self.d_ts, self.d_tl, self.d_c, self.max_speed, self.dt, self.cross_kind_collisions
        )

    def trial(self, layout_seed: int = 0, agent_seed: int = 0, walk_seed: int = 0) -> TrialConfig:
        return TrialConfig(
            self.iterations, self.record_stride, self.rw_persistence, layout_seed, agent_seed, walk_seed
        )

    def tau_threshold(self) -> int:
        return self.threshold or default_threshold(self.n_targets)

    def with_overrides(self, pairs: dict[str, str]) -> "RunConfig":
        return dataclasses.replace(self, **_coerce(pairs))

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _coerce(pairs: dict[str, str]) -> dict:
    types = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for key, raw in pairs.items():
        if key not in types:
            raise ConfigError(f"unknown config key {key!r}")
        typ = types[key]
        try:
            if typ == "bool":
                out[key] = _parse_bool(raw)
            elif typ == "int":
                out[key] = int(raw)
            elif typ == "float":
                out[key] = float(raw)
            else:
                out[key] = raw.strip()
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
    return out


def parse_pairs(lines, source: str = "<config>") -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def load_config(path: str | Path | None = None, overrides: dict[str, str] | None = None) -> RunConfig:
    pairs: dict[str, str] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        pairs.update(parse_pairs(text.splitlines(), str(path)))
    pairs.update(overrides or {})
    return RunConfig(**_coerce(pairs))


def dump_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
