"""Scenario grids, Monte Carlo sweeps and CSV persistence.

Seed schedule: a trial's target layout depends only on ``(base_seed, trial)``,
so every team composition and strategy faces the same ten layouts. Agent
placement and random-walk streams additionally depend on the composition and
strategy.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from .config import RunConfig
from .heterogeneity import DEFAULT_TABLE, CompositionPoint, ProfileTable, heterogeneity_measure, load_profiles
from .metrics import COST_SETTINGS, TauStats, aggregate_tau, efficiency
from .simulation import TrialRecord, run_trial
from .world import Strategy

SERIES_HEADER = ["scenario", "strategy", "n_r", "n_s", "trial", "iteration", "retrieved"]
SUMMARY_HEADER = [
    "scenario", "strategy", "n_r", "n_s", "trials", "censored",
    "tau_mean_iter", "tau_std_iter", "tau_mean_s", "E", "Q", "H",
    "efficiency_cost_a", "efficiency_cost_b",
]


class Scenario(IntEnum):
    SC1 = 1  # homogeneous rescuers, 5..50
    SC2 = 2  # 25 rescuers plus 0..50 searchers
    SC3 = 3  # 50 agents, 0..45 searchers

    @classmethod
    def parse(cls, value) -> "Scenario":
        if isinstance(value, Scenario):
            return value
        text = str(value).strip().lower().removeprefix("scenario")
        try:
            return cls(int(text))
        except ValueError:
            raise ValueError(f"unknown scenario {value!r}; expected 1, 2 or 3") from None


def scenario_combinations(kind) -> list[tuple[int, int]]:
    kind = Scenario.parse(kind)
    if kind is Scenario.SC1:
        return [(n_r, 0) for n_r in range(5, 51, 5)]
    if kind is Scenario.SC2:
        return [(25, n_s) for n_s in range(0, 51, 5)]
    return [(50 - n_s, n_s) for n_s in range(0, 46, 5)]


def _seed(*words: int) -> int:
    return int(np.random.SeedSequence([int(w) for w in words]).generate_state(1, dtype=np.uint64)[0])


def trial_seeds(base_seed: int, trial: int, n_r: int, n_s: int, strategy) -> tuple[int, int, int]:
    """``(layout_seed, agent_seed, walk_seed)`` for one trial."""
    s = int(Strategy.parse(strategy))
    layout = _seed(base_seed, trial)
    agent = _seed(base_seed, trial, n_r, n_s, s, 1)
    walk = _seed(base_seed, trial, n_r, n_s, s, 2)
    return layout, agent, walk


@dataclass
class SweepRow:
    scenario: int
    strategy: int
    n_r: int
    n_s: int
    seeds: list[tuple[int, int, int]]
    tau: TauStats
    E: float
    Q: float
    H: float
    efficiency_a: float
    efficiency_b: float
    records: list[TrialRecord] = field(default_factory=list, repr=False)

    @property
    def trials(self) -> int:
        return len(self.seeds)


@dataclass
class SweepResult:
    rows: list[SweepRow]
    config: RunConfig = field(default_factory=RunConfig)

    def row(self, strategy, n_r: int, n_s: int) -> SweepRow:
        strategy = int(Strategy.parse(strategy))
        for r in self.rows:
            if (r.strategy, r.n_r, r.n_s) == (strategy, n_r, n_s):
                return r
        raise KeyError((strategy, n_r, n_s))

    def merged(self, other: "SweepResult") -> "SweepResult":
        return SweepResult(self.rows + other.rows, self.config)


def _trial_job(args):
    cfg, n_r, n_s, strategy, seeds, backend = args
    return run_trial(cfg.arena(), cfg.sensors(), n_r, n_s, strategy, cfg.trial(*seeds), backend)


def _profile_table(cfg: RunConfig) -> ProfileTable:
    return load_profiles(cfg.profiles) if cfg.profiles else DEFAULT_TABLE


def run_sweep(
    scenario,
    strategy,
    trials: int | None = None,
    base_seed: int | None = None,
    config: RunConfig | None = None,
    workers: int | None = None,
    backend: str | None = None,
) -> SweepResult:
    """Run every composition of ``scenario`` under ``strategy``."""
    cfg = config or RunConfig()
    scenario = Scenario.parse(scenario)
    strategy = Strategy.parse(strategy)
    trials = cfg.trials if trials is None else trials
    base_seed = cfg.base_seed if base_seed is None else base_seed
    workers = cfg.workers if workers is None else workers
    if trials < 1:
        raise ValueError("trials must be >= 1")
    table = _profile_table(cfg)

    combos = scenario_combinations(scenario)
    jobs = [
        (cfg, n_r, n_s, strategy, trial_seeds(base_seed, t, n_r, n_s, strategy), backend)
        for n_r, n_s in combos
        for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves job order, so output order never depends on scheduling
            records = list(pool.map(_trial_job, jobs, chunksize=1))
    else:
        records = [_trial_job(j) for j in jobs]

    threshold = cfg.tau_threshold()
    cost_a, cost_b = COST_SETTINGS[strategy]
    rows = []
    for k, (n_r, n_s) in enumerate(combos):
        recs = records[k * trials:(k + 1) * trials]
        tau = aggregate_tau(recs, threshold)
        e, q, h = heterogeneity_measure(CompositionPoint(n_r, n_s, strategy), table)
        rows.append(
            SweepRow(
                scenario=int(scenario), strategy=int(strategy), n_r=n_r, n_s=n_s,
                seeds=[r.seeds for r in recs], tau=tau, E=e, Q=q, H=h,
                efficiency_a=efficiency(tau.mean_s, cost_a, n_r, n_s),
                efficiency_b=efficiency(tau.mean_s, cost_b, n_r, n_s),
                records=recs,
            )
        )
    return SweepResult(rows, cfg)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


@contextmanager
def _atomic_text(path: str | Path):
    """Write to a temp file next to ``path`` and move it into place on success."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_series_csv(result: SweepResult, path) -> Path:
    with _atomic_text(path) as fh:
        w = csv.writer(fh)
        w.writerow(SERIES_HEADER)
        for row in result.rows:
            for t, rec in enumerate(row.records):
                for it, got in rec.series:
                    w.writerow([row.scenario, row.strategy, row.n_r, row.n_s, t, it, got])
    return Path(path)


def summary_rows(result: SweepResult) -> list[list]:
    return [
        [
            r.scenario, r.strategy, r.n_r, r.n_s, r.trials, r.tau.censored,
            _fmt(r.tau.mean_iter), _fmt(r.tau.std_iter), _fmt(r.tau.mean_s),
            _fmt(r.E), _fmt(r.Q), _fmt(r.H), _fmt(r.efficiency_a), _fmt(r.efficiency_b),
        ]
        for r in result.rows
    ]


def write_summary_csv(result: SweepResult, path) -> Path:
    with _atomic_text(path) as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        w.writerows(summary_rows(result))
    return Path(path)


def write_manifest(result: SweepResult, path, extra: dict | None = None) -> Path:
    """JSON record of every config value and every trial seed."""
    doc = {
        "config": result.config.as_dict(),
        "combinations": [
            {
                "scenario": r.scenario, "strategy": r.strategy, "n_r": r.n_r, "n_s": r.n_s,
                "seeds": [list(s) for s in r.seeds],
            }
            for r in result.rows
        ],
    }
    doc.update(extra or {})
    with _atomic_text(path) as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    return Path(path)


class CsvFormatError(ValueError):
    pass


def _read_csv(path, header: list[str], types: dict[str, type]) -> list[dict]:
    path = Path(path)
    try:
        fh = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise CsvFormatError(f"{path}: row 1: unexpected header {got}")
        out = []
        for lineno, raw in enumerate(reader, 2):
            if len(raw) != len(header):
                raise CsvFormatError(f"{path}: row {lineno}: expected {len(header)} fields, got {len(raw)}")
            try:
                out.append({k: types.get(k, float)(v) for k, v in zip(header, raw)})
            except ValueError as exc:
                raise CsvFormatError(f"{path}: row {lineno}: {exc}") from None
        return out


def read_summary_csv(path) -> list[dict]:
    ints = {k: int for k in ("scenario", "strategy", "n_r", "n_s", "trials", "censored")}
    return _read_csv(path, SUMMARY_HEADER, ints)


def read_series_csv(path) -> list[dict]:
    return _read_csv(path, SERIES_HEADER, {k: int for k in SERIES_HEADER})


def audit(series_path, summary_path, config: RunConfig | None = None) -> list[str]:
    """Recompute summary columns from the series CSV; returns discrepancies.

    Time constants are checked to within one record stride, since the series
    is strided while the summary uses full-resolution first-reach ticks.
    """
    cfg = config or RunConfig()
    threshold = cfg.tau_threshold()
    table = _profile_table(cfg)
    grouped: dict[tuple, dict[int, list[tuple[int, int]]]] = {}
    for r in read_series_csv(series_path):
        key = (r["scenario"], r["strategy"], r["n_r"], r["n_s"])
        grouped.setdefault(key, {}).setdefault(r["trial"], []).append((r["iteration"], r["retrieved"]))

    problems = []
    for s in read_summary_csv(summary_path):
        key = (s["scenario"], s["strategy"], s["n_r"], s["n_s"])
        trials = grouped.get(key)
        if trials is None:
            problems.append(f"{key}: no series rows")
            continue
        if len(trials) != s["trials"]:
            problems.append(f"{key}: {len(trials)} trials in series, {s['trials']} in summary")
        upper, censored = [], 0
        for series in trials.values():
            series.sort()
            last = series[-1][0]
            hit = next((it for it, got in series if got >= threshold), None)
            if hit is None:
                censored += 1
                upper.append(last)
            else:
                upper.append(hit)
        if censored != s["censored"]:
            problems.append(f"{key}: censored {censored} != {s['censored']}")
        ub = float(np.mean(upper))
        if not (ub - cfg.record_stride < s["tau_mean_iter"] <= ub + 1e-9):
            problems.append(f"{key}: tau_mean_iter {s['tau_mean_iter']} outside ({ub - cfg.record_stride}, {ub}]")
        e, q, h = heterogeneity_measure(CompositionPoint(s["n_r"], s["n_s"], s["strategy"]), table)
        for name, val in (("E", e), ("Q", q), ("H", h)):
            if abs(val - s[name]) > 1e-9 * max(1.0, abs(val)):
                problems.append(f"{key}: {name} {s[name]} != {val}")
        cost_a, cost_b = COST_SETTINGS[Strategy(s["strategy"])]
        for name, cost in (("efficiency_cost_a", cost_a), ("efficiency_cost_b", cost_b)):
            want = efficiency(s["tau_mean_s"], cost, s["n_r"], s["n_s"])
            if abs(want - s[name]) > 1e-9 * abs(want):
                problems.append(f"{key}: {name} {s[name]} != {want}")
    return problems
