"""Run summaries: per-trace metrics, mode comparison, and rendering.

Metrics are plain ordered dicts so they can be rendered either as a
flat ``key=value`` block (stable, machine-readable) or as indented
human-readable text.
"""

from __future__ import annotations

import math
from typing import Sequence

from .dynamics import fx_gx, map_disturbance
from .engine import ComparisonOutcome, RunResult, TraceRecord
from .errors import InvalidStateError
from .params import LimbParams

Metrics = dict[str, object]


def _spectral_norm(g) -> float:
    (a, b), (c, d) = g
    e = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = e * e - 4.0 * det * det
    return math.sqrt(0.5 * (e + math.sqrt(max(0.0, disc))))


def trace_metrics(records: Sequence[TraceRecord]) -> Metrics:
    """Statistics recoverable from a trace alone."""
    if not records:
        raise InvalidStateError("empty trace")
    max1 = max2 = 0.0
    t_peak = records[0].t
    peak = -1.0
    s_max = 0.0
    sq_sum = 0.0
    triggers = 0
    trigger_times = []
    for rec in records:
        a1 = abs(rec.err[0])
        a2 = abs(rec.err[1])
        if a1 > max1:
            max1 = a1
        if a2 > max2:
            max2 = a2
        m = a1 if a1 > a2 else a2
        if m > peak:
            peak = m
            t_peak = rec.t
        if rec.s_norm > s_max:
            s_max = rec.s_norm
        sq_sum += rec.err[0] ** 2 + rec.err[1] ** 2
        if rec.triggered:
            triggers += 1
            trigger_times.append(rec.t)
    n = len(records)
    sampling = records[1].t - records[0].t if n > 1 else math.nan
    gaps = []
    for prev, cur in zip(trigger_times, trigger_times[1:]):
        raw = cur - prev
        gaps.append(round(raw / sampling) * sampling if sampling else raw)
    out: Metrics = {
        "samples": n,
        "triggers": triggers,
        "max_err1_rad": max1,
        "max_err2_rad": max2,
        "max_err_rad": peak,
        "peak_err_time_s": t_peak,
        "rms_err_rad": math.sqrt(sq_sum / (2 * n)),
        "max_s_norm": s_max,
        "min_inter_event_s": min(gaps) if gaps else math.nan,
        "max_inter_event_s": max(gaps) if gaps else math.nan,
        "mean_inter_event_s": sum(gaps) / len(gaps) if gaps else math.nan,
    }
    return out


def summarize(result: RunResult) -> Metrics:
    """Trace statistics plus the run-level diagnostics."""
    out: Metrics = {"mode": result.mode}
    out.update(trace_metrics(result.records))
    out["threshold"] = result.threshold_value
    out["zeno_lower_bound_s"] = result.zeno_value
    out["zeno_bound_vacuous"] = int(result.zeno_value <= 0.0)
    out["runtime_s"] = result.runtime_s
    return out


def velocity_reversals(traj, duration: float,
                       dt: float = 1e-3) -> tuple[list[float], list[float]]:
    """Times in [0, duration) where a desired joint velocity changes sign."""
    out: tuple[list[float], list[float]] = ([], [])
    n = int(round(duration / dt))
    _, v_prev, _ = traj.desired(0.0)
    for i in range(1, n + 1):
        t = i * dt
        _, v, _ = traj.desired(t)
        for j in range(2):
            if v_prev[j] == 0.0 or v_prev[j] * v[j] < 0.0:
                out[j].append((i - 1) * dt)
        v_prev = v
    return out


def compare_metrics(outcome: ComparisonOutcome,
                    limb: LimbParams | None = None,
                    disturbance_bound: float | None = None) -> Metrics:
    """Side-by-side metrics of both modes plus reduction diagnostics.

    When the limb parameters and the disturbance torque bound are
    supplied, the report also estimates the reaching-gain margin:
    rho must dominate g0 * d0_v + eta, with d0_v the disturbance
    re-expressed in the deformation channel along the visited poses.
    """
    tt = summarize(outcome.time_result)
    et = summarize(outcome.event_result)
    out: Metrics = {}
    for key, value in tt.items():
        out[f"tt_{key}"] = value
    for key, value in et.items():
        out[f"et_{key}"] = value
    et_triggers = et["triggers"]
    tt_triggers = tt["triggers"]
    out["reduction_factor"] = (
        tt_triggers / et_triggers if et_triggers else math.inf
    )
    out["error_ratio"] = (
        et["max_err_rad"] / tt["max_err_rad"]
        if tt["max_err_rad"] else math.inf
    )
    if limb is not None and disturbance_bound is not None:
        g0 = 0.0
        d0_v = 0.0
        for rec in outcome.event_result.records:
            _, g = fx_gx(rec.theta, (0.0, 0.0), limb)
            norm = _spectral_norm(g)
            if norm > g0:
                g0 = norm
            dv = map_disturbance(
                (disturbance_bound, disturbance_bound), rec.theta, limb
            )
            mag = math.hypot(dv[0], dv[1])
            if mag > d0_v:
                d0_v = mag
        out["g0_estimate"] = g0
        out["mapped_disturbance_bound_m"] = d0_v
        out["reaching_margin_floor"] = g0 * d0_v
    return out


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_kv(metrics: Metrics) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in metrics.items())


def render_text(metrics: Metrics, title: str = "run summary") -> str:
    width = max(len(k) for k in metrics) if metrics else 0
    lines = [title, "-" * len(title)]
    lines.extend(f"{k.ljust(width)}  {_fmt(v)}" for k, v in metrics.items())
    lines.append("")
    return "\n".join(lines)
