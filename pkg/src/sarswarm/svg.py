"""Dependency-free SVG 1.1 output: report charts and world snapshots."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .world import SEARCHER, World

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
           "#bcbd22", "#e377c2", "#393b79", "#637939"]
STATE_RAY = {0: "#ffffff", 1: "#ff2020", 2: "#20d020", 3: "#ffffff", 4: "#ffffff"}
KIND_FILL = {0: "#f0c020", 1: "#3080ff"}  # searcher, rescuer

W, H = 640, 400
ML, MR, MT, MB = 64, 150, 36, 48


def _doc(width: float, height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}" font-family="sans-serif" font-size="11">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _nice_max(v: float) -> float:
    if not np.isfinite(v) or v <= 0:
        return 1.0
    exp = 10 ** np.floor(np.log10(v))
    for m in (1, 2, 2.5, 5, 10):
        if m * exp >= v:
            return float(m * exp)
    return float(10 * exp)


@dataclass
class _Axes:
    x0: float
    x1: float
    y0: float
    y1: float

    def px(self, x: float) -> float:
        span = (self.x1 - self.x0) or 1.0
        return ML + (x - self.x0) / span * (W - ML - MR)

    def py(self, y: float) -> float:
        span = (self.y1 - self.y0) or 1.0
        return H - MB - (y - self.y0) / span * (H - MT - MB)


def _frame(ax: _Axes, title: str, xlabel: str, ylabel: str, xticks=None) -> list[str]:
    out = [
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
        f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
        f'<text x="{(ML + W - MR) / 2:.1f}" y="{H - 10}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="16" y="{(MT + H - MB) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(MT + H - MB) / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for k in range(6):
        v = ax.y0 + (ax.y1 - ax.y0) * k / 5
        y = ax.py(v)
        out.append(f'<line x1="{ML - 4}" y1="{y:.2f}" x2="{ML}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ML - 6}" y="{y + 4:.2f}" text-anchor="end">{v:.4g}</text>')
    if xticks is None:
        xticks = [(ax.x0 + (ax.x1 - ax.x0) * k / 5, None) for k in range(6)]
    for v, label in xticks:
        x = ax.px(v)
        text = label if label is not None else f"{v:.4g}"
        out.append(f'<line x1="{x:.2f}" y1="{H - MB}" x2="{x:.2f}" y2="{H - MB + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{H - MB + 16}" text-anchor="middle">{escape(text)}</text>')
    return out


def _legend(labels: list[str]) -> list[str]:
    out = []
    for k, label in enumerate(labels):
        y = MT + 14 * k
        c = PALETTE[k % len(PALETTE)]
        out.append(f'<rect x="{W - MR + 10}" y="{y}" width="10" height="10" fill="{c}"/>')
        out.append(f'<text x="{W - MR + 24}" y="{y + 9}">{escape(label)}</text>')
    return out


def line_chart(series: dict[str, tuple], title: str, xlabel: str, ylabel: str, markers: bool = False) -> str:
    """``series`` maps label -> (xs, ys)."""
    xs_all = [float(x) for xs, _ in series.values() for x in xs]
    ys_all = [float(y) for _, ys in series.values() for y in ys if np.isfinite(y)]
    ax = _Axes(min(xs_all, default=0.0), max(xs_all, default=1.0), 0.0, _nice_max(max(ys_all, default=1.0)))
    body = _frame(ax, title, xlabel, ylabel)
    for k, (label, (xs, ys)) in enumerate(series.items()):
        c = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{ax.px(float(x)):.2f},{ax.py(float(y)):.2f}" for x, y in zip(xs, ys) if np.isfinite(y))
        body.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        if markers:
            for x, y in zip(xs, ys):
                if np.isfinite(y):
                    body.append(f'<circle cx="{ax.px(float(x)):.2f}" cy="{ax.py(float(y)):.2f}" r="2.5" fill="{c}"/>')
    body += _legend(list(series))
    return _doc(W, H, body)


def bar_chart(groups: list[str], bars: dict[str, tuple[list[float], list[float]]], title: str, ylabel: str) -> str:
    """Grouped bars with mean +- std whiskers; ``bars`` maps label -> (means, stds)."""
    top = max((m + s for ms, ss in bars.values() for m, s in zip(ms, ss) if np.isfinite(m)), default=1.0)
    ng, nb = len(groups), max(len(bars), 1)
    ax = _Axes(-0.5, ng - 0.5, 0.0, _nice_max(top))
    body = _frame(ax, title, "composition (n_r, n_s)", ylabel, [(g, label) for g, label in enumerate(groups)])
    slot = (ax.px(1) - ax.px(0)) * 0.8 / nb
    for b, (label, (means, stds)) in enumerate(bars.items()):
        c = PALETTE[b % len(PALETTE)]
        for g, (m, s) in enumerate(zip(means, stds)):
            if not np.isfinite(m):
                continue
            x = ax.px(g) - slot * nb / 2 + slot * b
            y = ax.py(m)
            body.append(
                f'<rect class="bar" x="{x:.2f}" y="{y:.2f}" width="{slot:.2f}" height="{ax.py(0) - y:.2f}" fill="{c}"/>'
            )
            cx = x + slot / 2
            y_hi, y_lo = ax.py(m + s), ax.py(max(m - s, 0.0))
            body.append(
                f'<line class="whisker" x1="{cx:.2f}" y1="{y_lo:.2f}" x2="{cx:.2f}" y2="{y_hi:.2f}" '
                f'stroke="black" data-height="{y_lo - y_hi:.2f}"/>'
            )
    body += _legend(list(bars))
    return _doc(W, H, body)


def world_snapshot(world: World, scale: float = 6.0, ray: float = 3.0) -> str:
    """Targets, collection squares, agents by kind and heading rays by state."""
    aw, ah = world.arena.width * scale, world.arena.height * scale

    def sx(x):
        return x * scale

    def sy(y):
        return ah - y * scale  # y axis points up

    body = [
        f'<rect x="0" y="0" width="{aw:g}" height="{ah:g}" fill="#202020"/>',
        f'<text x="6" y="14" fill="white">iteration {world.iteration}  retrieved {world.retrieved}</text>',
    ]
    for sq in world.arena.collection_points:
        r = sq.rect
        body.append(
            f'<rect class="collection" x="{sx(r.x0):.2f}" y="{sy(r.y1):.2f}" width="{(r.x1 - r.x0) * scale:.2f}" '
            f'height="{(r.y1 - r.y0) * scale:.2f}" fill="none" stroke="#a0a0a0" stroke-width="2"/>'
        )
    for t in np.flatnonzero(world.target_alive):
        x, y = world.target_pos[t]
        body.append(f'<rect class="target" x="{sx(x) - 2:.2f}" y="{sy(y) - 2:.2f}" width="4" height="4" fill="#c08040"/>')
    for i in range(world.n_agents):
        x, y = world.pos[i]
        vx, vy = world.velocity[i]
        sp = float(np.hypot(vx, vy))
        k = int(world.kind[i])
        st = int(world.state[i])
        if sp > 0:
            ex, ey = x + vx / sp * ray, y + vy / sp * ray
            body.append(
                f'<line class="ray state{st}" x1="{sx(x):.2f}" y1="{sy(y):.2f}" x2="{sx(ex):.2f}" y2="{sy(ey):.2f}" '
                f'stroke="{STATE_RAY.get(st, "#ffffff")}" stroke-width="1.5"/>'
            )
        cls = "searcher" if k == SEARCHER else "rescuer"
        body.append(f'<circle class="agent {cls}" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{0.75 * scale:.2f}" '
                    f'fill="{KIND_FILL[k]}"/>')
    return _doc(aw, ah, body)
