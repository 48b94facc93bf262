"""Minimal deterministic SVG renderings of run traces.

Plots are written as standalone SVG by string assembly: fixed canvas,
fixed formatting widths, no timestamps, so identical runs produce
identical bytes.  Every file parses as well-formed XML.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .engine import TraceRecord

_W, _H = 960, 420
_ML, _MR, _MT, _MB = 64, 18, 30, 46

_TT_COLOR = "#1f77b4"
_ET_COLOR = "#d62728"
_AUX_COLOR = "#2ca02c"
_REF_COLOR = "#777777"


@dataclass(frozen=True)
class Series:
    label: str
    color: str
    xs: Sequence[float]
    ys: Sequence[float]
    dash: str = ""


def _finite(values):
    return [v for v in values if math.isfinite(v)]


def _range(lo: float, hi: float) -> tuple[float, float]:
    if hi < lo:
        lo, hi = 0.0, 1.0
    if hi == lo:
        pad = abs(hi) * 0.5 + 0.5
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def line_plot(title: str, xlabel: str, ylabel: str,
              series: Sequence[Series], hlines: Sequence[tuple[float, str]] = (),
              stems: Sequence[float] = ()) -> str:
    """Render one chart; ``hlines`` are labeled y-references and
    ``stems`` are event times marked along the bottom edge."""
    xs_all = _finite([x for s in series for x in s.xs])
    ys_all = _finite([y for s in series for y in s.ys])
    ys_all.extend(v for v, _ in hlines)
    x0, x1 = _range(min(xs_all, default=0.0), max(xs_all, default=1.0))
    y0, y1 = _range(min(ys_all, default=0.0), max(ys_all, default=1.0))
    px_w = _W - _ML - _MR
    px_h = _H - _MT - _MB

    def sx(x: float) -> float:
        return _ML + (x - x0) / (x1 - x0) * px_w

    def sy(y: float) -> float:
        return _H - _MB - (y - y0) / (y1 - y0) * px_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
        f'height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{px_w}" height="{px_h}" '
        'fill="none" stroke="#222222" stroke-width="1"/>',
        f'<text x="{_W // 2}" y="18" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{escape(title)}</text>',
        f'<text x="{_W // 2}" y="{_H - 10}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{escape(xlabel)}</text>',
        f'<text x="16" y="{_H // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 16 {_H // 2})">{escape(ylabel)}</text>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        xp = sx(xv)
        yp = sy(yv)
        parts.append(
            f'<line x1="{xp:.2f}" y1="{_H - _MB}" x2="{xp:.2f}" '
            f'y2="{_H - _MB + 5}" stroke="#222222" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xp:.2f}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{xv:.4g}</text>'
        )
        parts.append(
            f'<line x1="{_ML - 5}" y1="{yp:.2f}" x2="{_ML}" y2="{yp:.2f}" '
            'stroke="#222222" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{yp + 4:.2f}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{yv:.4g}</text>'
        )
    for value, label in hlines:
        yp = sy(value)
        parts.append(
            f'<line x1="{_ML}" y1="{yp:.2f}" x2="{_W - _MR}" y2="{yp:.2f}" '
            f'stroke="{_REF_COLOR}" stroke-width="1" '
            'stroke-dasharray="3,3"/>'
        )
        parts.append(
            f'<text x="{_W - _MR - 4}" y="{yp - 4:.2f}" text-anchor="end" '
            f'font-family="monospace" font-size="11" fill="{_REF_COLOR}">'
            f'{escape(label)}</text>'
        )
    for t in stems:
        xp = sx(t)
        parts.append(
            f'<line x1="{xp:.2f}" y1="{_H - _MB - 10}" x2="{xp:.2f}" '
            f'y2="{_H - _MB}" stroke="{_AUX_COLOR}" stroke-width="1"/>'
        )
    for s in series:
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(s.xs, s.ys)
            if math.isfinite(x) and math.isfinite(y)
        )
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{s.color}" '
            f'stroke-width="1.2"{dash}/>'
        )
    for i, s in enumerate(series):
        ly = _MT + 16 + 16 * i
        lx = _W - _MR - 170
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{s.color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="monospace" '
            f'font-size="11">{escape(s.label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _save(path: Path, svg: str) -> Path:
    path.write_bytes(svg.encode("utf-8"))
    return path


def _col(records: Sequence[TraceRecord], fn) -> list[float]:
    return [fn(r) for r in records]


def single_run_plots(out_dir: str | Path, records: Sequence[TraceRecord],
                     threshold: float, mode: str) -> list[Path]:
    """``tracking.svg`` and ``events.svg`` for one run."""
    out = Path(out_dir)
    ts = _col(records, lambda r: r.t)
    trig_times = [r.t for r in records if r.triggered]
    tracking = line_plot(
        f"joint tracking ({mode})", "time [s]", "angle [rad]",
        [
            Series("theta1", _TT_COLOR, ts, _col(records, lambda r: r.theta[0])),
            Series("theta_d1", _TT_COLOR, ts,
                   _col(records, lambda r: r.theta_d[0]), dash="6,4"),
            Series("theta2", _ET_COLOR, ts, _col(records, lambda r: r.theta[1])),
            Series("theta_d2", _ET_COLOR, ts,
                   _col(records, lambda r: r.theta_d[1]), dash="6,4"),
        ],
    )
    events = line_plot(
        f"event error and triggers ({mode})", "time [s]", "||e||_F",
        [Series("e_norm", _ET_COLOR, ts, _col(records, lambda r: r.e_norm))],
        hlines=[(threshold, "threshold")],
        stems=trig_times,
    )
    return [
        _save(out / "tracking.svg", tracking),
        _save(out / "events.svg", events),
    ]


def comparison_plots(out_dir: str | Path, tt: Sequence[TraceRecord],
                     et: Sequence[TraceRecord], threshold: float,
                     sampling_period: float) -> list[Path]:
    """Five side-by-side charts for a mode comparison."""
    out = Path(out_dir)
    ts_tt = _col(tt, lambda r: r.t)
    ts_et = _col(et, lambda r: r.t)
    paths = []
    for joint in (0, 1):
        svg = line_plot(
            f"tracking error, joint {joint + 1}", "time [s]", "error [rad]",
            [
                Series("time-triggered", _TT_COLOR, ts_tt,
                       _col(tt, lambda r: r.err[joint])),
                Series("event-triggered", _ET_COLOR, ts_et,
                       _col(et, lambda r: r.err[joint])),
            ],
        )
        paths.append(_save(out / f"err{joint + 1}.svg", svg))
    control = line_plot(
        "nut voltage commands", "time [s]", "U_v [V]",
        [
            Series("tt U_v1", _TT_COLOR, ts_tt, _col(tt, lambda r: r.u_v[0])),
            Series("tt U_v2", "#9467bd", ts_tt, _col(tt, lambda r: r.u_v[1])),
            Series("et U_v1", _ET_COLOR, ts_et, _col(et, lambda r: r.u_v[0])),
            Series("et U_v2", "#ff7f0e", ts_et, _col(et, lambda r: r.u_v[1])),
        ],
    )
    paths.append(_save(out / "control.svg", control))
    surface = line_plot(
        "sliding surface norm", "time [s]", "||s||",
        [
            Series("time-triggered", _TT_COLOR, ts_tt,
                   _col(tt, lambda r: r.s_norm)),
            Series("event-triggered", _ET_COLOR, ts_et,
                   _col(et, lambda r: r.s_norm)),
        ],
    )
    paths.append(_save(out / "surface.svg", surface))
    et_trigs = [r.t for r in et if r.triggered]
    gap_t = et_trigs[1:]
    gaps = [round((b - a) / sampling_period) * sampling_period
            for a, b in zip(et_trigs, et_trigs[1:])]
    tt_trigs = [r.t for r in tt if r.triggered]
    tt_gap_t = tt_trigs[1:]
    tt_gaps = [round((b - a) / sampling_period) * sampling_period
               for a, b in zip(tt_trigs, tt_trigs[1:])]
    intervals = line_plot(
        "inter-event intervals", "trigger time [s]", "interval [s]",
        [
            Series("time-triggered", _TT_COLOR, tt_gap_t, tt_gaps),
            Series("event-triggered", _ET_COLOR, gap_t, gaps),
        ],
    )
    paths.append(_save(out / "intervals.svg", intervals))
    return paths
