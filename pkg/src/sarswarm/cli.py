"""Command-line driver: ``sarswarm {trial,sweep,measure,report}``."""

from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from . import svg
from .config import ConfigError, RunConfig, dump_config, load_config
from .harness import (
    CsvFormatError,
    Scenario,
    _atomic_text,
    _profile_table,
    read_series_csv,
    read_summary_csv,
    run_sweep,
    scenario_combinations,
    trial_seeds,
    write_manifest,
    write_series_csv,
    write_summary_csv,
)
from .heterogeneity import CompositionPoint, heterogeneity_measure
from .simulation import BACKENDS, TrialRecord, advance
from .world import Strategy, build_world

TRIAL_HEADER = ["strategy", "n_r", "n_s", "seed", "iteration", "retrieved"]
MEASURE_HEADER = ["scenario", "strategy", "n_r", "n_s", "E", "Q", "H"]
STRATEGY_CHOICES = ["1", "2", "3"]


def _kv(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _strategies(value: str) -> list[Strategy]:
    return list(Strategy) if value == "all" else [Strategy(int(value))]


def _config(args) -> RunConfig:
    return load_config(args.config, dict(args.set or []))


def snapshot_iterations(total: int, k: int) -> list[int]:
    """``k`` evenly spaced iterations from 0 to ``total`` inclusive."""
    if k <= 0:
        return []
    if k == 1:
        return [0]
    return sorted({int(round(j * total / (k - 1))) for j in range(k)})


def cmd_trial(args) -> int:
    cfg = _config(args)
    if args.iterations is not None:
        cfg = cfg.with_overrides({"iterations": str(args.iterations)})
    strategy = Strategy(int(args.strategy))
    seeds = trial_seeds(args.seed, 0, args.nr, args.ns, strategy)
    tc = cfg.trial(*seeds)
    world = build_world(
        cfg.arena(), cfg.sensors(), args.nr, args.ns, strategy,
        layout_seed=seeds[0], agent_seed=seeds[1], walk_seed=seeds[2], rw_persistence=cfg.rw_persistence,
    )
    marks = snapshot_iterations(cfg.iterations, args.snapshots)
    out = Path(args.out)
    frames = []
    counts = np.empty(cfg.iterations + 1, dtype=np.int32)
    counts[0] = world.retrieved
    done = 0
    for mark in marks + [cfg.iterations]:
        if mark > done:
            counts[done + 1:mark + 1] = advance(world, mark - done, args.backend)
            done = mark
        if mark in marks and mark not in (f[0] for f in frames):
            frames.append((mark, svg.world_snapshot(world)))
    rec = TrialRecord.from_counts(counts, stride=tc.record_stride, n_targets=cfg.n_targets)

    with _atomic_text(out) as fh:
        w = csv.writer(fh)
        w.writerow(TRIAL_HEADER)
        for it, got in rec.series:
            w.writerow([int(strategy), args.nr, args.ns, args.seed, it, got])
    for it, text in frames:
        path = out.with_name(f"{out.stem}_iter{it:06d}.svg")
        with _atomic_text(path) as fh:
            fh.write(text)
    print(f"{out}: {len(rec.series)} rows, retrieved {rec.final_retrieved}/{cfg.n_targets}"
          + (f", {len(frames)} snapshots" if frames else ""))
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    scenario = Scenario.parse(args.scenario)
    trials = args.trials if args.trials is not None else cfg.trials
    base_seed = args.base_seed if args.base_seed is not None else cfg.base_seed
    workers = args.workers if args.workers is not None else cfg.workers
    result = None
    for s in _strategies(args.strategy):
        part = run_sweep(scenario, s, trials, base_seed, cfg, workers, args.backend)
        result = part if result is None else result.merged(part)
        print(f"scenario {int(scenario)} strategy {int(s)}: {len(part.rows)} combinations x {trials} trials",
              file=sys.stderr)
    out_dir = Path(args.out_dir)
    stem = f"scenario{int(scenario)}"
    write_series_csv(result, out_dir / f"{stem}_series.csv")
    write_summary_csv(result, out_dir / f"{stem}_summary.csv")
    write_manifest(result, out_dir / f"{stem}_manifest.json",
                   {"scenario": int(scenario), "trials": trials, "base_seed": base_seed})
    print(out_dir / f"{stem}_summary.csv")
    return 0


def cmd_measure(args) -> int:
    cfg = _config(args)
    table = _profile_table(cfg)
    rows = []
    for s in _strategies(args.strategy):
        for n_r, n_s in scenario_combinations(args.scenario):
            e, q, h = heterogeneity_measure(CompositionPoint(n_r, n_s, s), table)
            rows.append([int(Scenario.parse(args.scenario)), int(s), n_r, n_s,
                         format(e, ".12g"), format(q, ".12g"), format(h, ".12g")])
    if args.out:
        with _atomic_text(args.out) as fh:
            w = csv.writer(fh)
            w.writerow(MEASURE_HEADER)
            w.writerows(rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(MEASURE_HEADER)
        w.writerows(rows)
    return 0


def _composition_label(n_r: int, n_s: int) -> str:
    return f"{n_r},{n_s}"


def _x_of(scenario: int, n_r: int, n_s: int) -> int:
    return n_r if scenario == 1 else n_s


def report_charts(summary_rows: list[dict], series_rows: list[dict] | None = None) -> dict[str, str]:
    """Chart file name -> SVG text."""
    charts: dict[str, str] = {}
    by_scen: dict[int, list[dict]] = defaultdict(list)
    for r in summary_rows:
        by_scen[r["scenario"]].append(r)
    for scen, rows in sorted(by_scen.items()):
        comps = sorted({(r["n_r"], r["n_s"]) for r in rows}, key=lambda c: _x_of(scen, *c))
        strategies = sorted({r["strategy"] for r in rows})
        index = {(r["strategy"], r["n_r"], r["n_s"]): r for r in rows}
        xlabel = "rescuers n_r" if scen == 1 else "searchers n_s"

        bars = {}
        for s in strategies:
            means = [index[(s, *c)]["tau_mean_iter"] if (s, *c) in index else float("nan") for c in comps]
            stds = [index[(s, *c)]["tau_std_iter"] if (s, *c) in index else 0.0 for c in comps]
            bars[f"strategy {s}"] = (means, stds)
        charts[f"scenario{scen}_tau.svg"] = svg.bar_chart(
            [_composition_label(*c) for c in comps], bars,
            f"Scenario {scen}: time constant (mean and std over trials)", "tau [iterations]",
        )

        def curves(col):
            out = {}
            for s in strategies:
                pts = [(_x_of(scen, *c), index[(s, *c)][col]) for c in comps if (s, *c) in index]
                out[f"strategy {s}"] = ([p[0] for p in pts], [p[1] for p in pts])
            return out

        charts[f"scenario{scen}_heterogeneity.svg"] = svg.line_chart(
            curves("H"), f"Scenario {scen}: heterogeneity H", xlabel, "H", markers=True
        )
        for col, tag in (("efficiency_cost_a", "a"), ("efficiency_cost_b", "b")):
            charts[f"scenario{scen}_efficiency_{tag}.svg"] = svg.line_chart(
                curves(col), f"Scenario {scen}: efficiency, cost setting {tag}", xlabel, "1 / (tau cost)",
                markers=True,
            )

    if series_rows:
        acc: dict[tuple, dict[tuple, dict[int, list[int]]]] = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
        for r in series_rows:
            acc[(r["scenario"], r["strategy"])][(r["n_r"], r["n_s"])][r["iteration"]].append(r["retrieved"])
        for (scen, s), combos in sorted(acc.items()):
            lines = {}
            for comp in sorted(combos, key=lambda c: _x_of(scen, *c)):
                its = sorted(combos[comp])
                lines[f"({_composition_label(*comp)})"] = (its, [float(np.mean(combos[comp][i])) for i in its])
            charts[f"scenario{scen}_strategy{s}_retrieved.svg"] = svg.line_chart(
                lines, f"Scenario {scen}, strategy {s}: mean targets retrieved", "iteration", "retrieved"
            )
    return charts


def cmd_report(args) -> int:
    summary = [row for p in args.summary for row in read_summary_csv(p)]
    series = [row for p in (args.series or []) for row in read_series_csv(p)]
    out_dir = Path(args.out_dir)
    for name, text in report_charts(summary, series).items():
        with _atomic_text(out_dir / name) as fh:
            fh.write(text)
        print(out_dir / name)
    return 0


def cmd_config(args) -> int:
    sys.stdout.write(dump_config(_config(args)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sarswarm", description="Heterogeneous search-and-rescue swarm simulator.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--set", action="append", type=_kv, metavar="KEY=VALUE", help="override a config key")
    common.add_argument("--backend", choices=BACKENDS, default=None, help="force a simulation backend")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("trial", parents=[common], help="run one trial")
    t.add_argument("--nr", type=_nonneg, required=True, help="rescuers")
    t.add_argument("--ns", type=_nonneg, required=True, help="searchers")
    t.add_argument("--strategy", choices=STRATEGY_CHOICES, required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--iterations", type=_positive)
    t.add_argument("--snapshots", type=_nonneg, default=0, help="number of evenly spaced SVG frames")
    t.add_argument("--out", default="trial.csv")
    t.set_defaults(func=cmd_trial)

    s = sub.add_parser("sweep", parents=[common], help="run a scenario grid")
    s.add_argument("--scenario", choices=["1", "2", "3"], required=True)
    s.add_argument("--strategy", choices=STRATEGY_CHOICES + ["all"], default="all")
    s.add_argument("--trials", type=_positive)
    s.add_argument("--base-seed", type=int)
    s.add_argument("--workers", type=_positive)
    s.add_argument("--out-dir", default="results")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("measure", parents=[common], help="heterogeneity curves (no simulation)")
    m.add_argument("--scenario", choices=["1", "2", "3"], default="3")
    m.add_argument("--strategy", choices=STRATEGY_CHOICES + ["all"], default="all")
    m.add_argument("--out", help="CSV path (default stdout)")
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("report", help="render SVG charts from sweep CSVs")
    r.add_argument("--summary", nargs="+", required=True)
    r.add_argument("--series", nargs="*")
    r.add_argument("--out-dir", default="report")
    r.set_defaults(func=cmd_report)

    c = sub.add_parser("config", parents=[common], help="print the effective configuration")
    c.set_defaults(func=cmd_config)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        parser.exit(2, f"sarswarm: config error: {exc}\n")
    except CsvFormatError as exc:
        parser.exit(1, f"sarswarm: parse error: {exc}\n")
    except OSError as exc:
        parser.exit(1, f"sarswarm: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
