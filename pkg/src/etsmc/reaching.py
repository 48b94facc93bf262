"""Reaching-condition verification on the reduced joint model.

The full cascade hides the reaching argument behind the actuator loop,
so this harness checks it where it is exact: the deformation command
v_x applied directly to the joint dynamics,

    dd(x) = f_x + g_x (v_x + d_v),   ||d_v||_2 <= d0,

with v_x recomputed every integration step (continuous triggering in
the limit) and the pure sign law, no boundary layer.  The reaching gain
is constructed, not assumed: rho = g0 d0 + eta with g0 a pre-run bound
on ||g_x||_2 over every pose the run can visit.  Under that choice

    dV_x/dt = s^T (-rho sgn(s) + g_x d_v) <= -eta ||s||,

so V_x = s^T s / 2 must decay outside a small band around the surface.
The harness integrates from randomly offset initial errors and records
every step where that decay fails.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .control import GainSet, error_state, sliding_surface, smc_law
from .dynamics import fx_gx
from .errors import ConfigError
from .geometry import Vec2
from .params import LimbParams, default_limb_params
from .trajectory import GaitSpec


@dataclass(frozen=True)
class ReachingSetup:
    """One reduced-model run: seeded initial offset and disturbance."""

    duration: float = 0.25
    step: float = 4e-5
    d0: float = 0.01  # deformation-channel disturbance bound [m]
    offset_angle: float = 0.03  # rad, initial position error scale
    offset_rate: float = 0.2  # rad/s, initial velocity error scale
    surface_band: float = 1e-3  # ||s|| below which decay is not required
    pose_margin: float = 0.08  # rad, pose-box padding for the g0 sweep

    def validate(self) -> None:
        for name in ("duration", "step", "offset_angle", "offset_rate",
                     "surface_band", "pose_margin"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"reaching.{name} must be positive")
        if self.d0 < 0.0:
            raise ConfigError("reaching.d0 must be non-negative")


@dataclass
class ReachingResult:
    seed: int
    g0: float  # pre-run pose-box bound on ||g_x||_2
    g0_run: float  # max ||g_x||_2 actually seen along the run
    rho: float  # g0 * d0 + eta, the constructed reaching gain
    violations: int  # steps with ||s|| above the band but V_x not decaying
    checked: int  # steps where decay was required
    final_s_norm: float
    v_trace: list[float] = field(repr=False, default_factory=list)

    @property
    def ok(self) -> bool:
        """Decay held everywhere it was required and the bound was valid."""
        return (self.violations == 0 and self.checked > 0
                and self.g0_run <= self.g0)


def _spectral_norm(g) -> float:
    (a, b), (c, d) = g
    e = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = e * e - 4.0 * det * det
    return math.sqrt(0.5 * (e + math.sqrt(max(0.0, disc))))


def gain_bound(limb: LimbParams, traj, duration: float,
               margin: float, grid: int = 33) -> float:
    """Max ||g_x||_2 over the pose box the reduced run can visit.

    g_x depends on the joint angles only, so a grid sweep over the
    reference range padded by ``margin`` bounds it ahead of the run.
    """
    lo1 = hi1 = lo2 = hi2 = None
    n_t = 129
    for k in range(n_t):
        x_d, _, _ = traj.desired(duration * k / (n_t - 1))
        lo1 = x_d[0] if lo1 is None else min(lo1, x_d[0])
        hi1 = x_d[0] if hi1 is None else max(hi1, x_d[0])
        lo2 = x_d[1] if lo2 is None else min(lo2, x_d[1])
        hi2 = x_d[1] if hi2 is None else max(hi2, x_d[1])
    best = 0.0
    for i in range(grid):
        th1 = lo1 - margin + (hi1 - lo1 + 2.0 * margin) * i / (grid - 1)
        for j in range(grid):
            th2 = lo2 - margin + (hi2 - lo2 + 2.0 * margin) * j / (grid - 1)
            _, g = fx_gx((th1, th2), (0.0, 0.0), limb)
            norm = _spectral_norm(g)
            if norm > best:
                best = norm
    return best


def _disturbance(seed: int, d0: float):
    # per-channel amplitude d0/sqrt(2) keeps ||d_v(t)||_2 <= d0
    rng = np.random.Generator(np.random.PCG64(seed))
    freqs = rng.uniform(0.5, 8.0, 2)
    phases = rng.uniform(0.0, 2.0 * math.pi, 2)
    amp = d0 / math.sqrt(2.0)
    w1, p1 = 2.0 * math.pi * float(freqs[0]), float(phases[0])
    w2, p2 = 2.0 * math.pi * float(freqs[1]), float(phases[1])

    def d_v(t: float) -> Vec2:
        return (amp * math.sin(w1 * t + p1), amp * math.sin(w2 * t + p2))

    return d_v


def reaching_run(seed: int, *, limb: LimbParams | None = None,
                 gains: GainSet | None = None, eta: float = 0.3,
                 traj=None, setup: ReachingSetup | None = None,
                 g0: float | None = None) -> ReachingResult:
    """Integrate one seeded reduced-model run and audit V_x decay.

    The decay requirement is discrete: V_x(t+h) < V_x(t) whenever the
    surface norm stays above ``surface_band`` across the step.  ``g0``
    may be passed in when a sweep shares one pose-box bound.
    """
    limb = limb if limb is not None else default_limb_params()
    gains = gains if gains is not None else GainSet()
    traj = traj if traj is not None else GaitSpec()
    setup = setup if setup is not None else ReachingSetup()
    limb.validate()
    gains.validate()
    setup.validate()
    if not eta > 0.0:
        raise ConfigError("reaching eta must be strictly positive")

    if g0 is None:
        g0 = gain_bound(limb, traj, setup.duration, setup.pose_margin)
    rho = g0 * setup.d0 + eta
    run_gains = dataclasses.replace(gains, rho=rho, boundary_layer=0.0)

    rng = np.random.Generator(np.random.PCG64(seed + 1_000_003))
    off1 = rng.uniform(-setup.offset_angle, setup.offset_angle, 2)
    off2 = rng.uniform(-setup.offset_rate, setup.offset_rate, 2)
    x_d0, x_d_dot0, _ = traj.desired(0.0)
    x1 = (x_d0[0] + float(off1[0]), x_d0[1] + float(off1[1]))
    x2 = (x_d_dot0[0] + float(off2[0]), x_d_dot0[1] + float(off2[1]))
    d_v = _disturbance(seed, setup.d0)

    h = setup.step
    n = int(round(setup.duration / h))
    band = setup.surface_band
    g0_run = 0.0
    violations = 0
    checked = 0
    v_trace: list[float] = []

    def accel(x1v: Vec2, x2v: Vec2, v_x: Vec2, t: float) -> Vec2:
        f, g = fx_gx(x1v, x2v, limb)
        dv = d_v(t)
        u = (v_x[0] + dv[0], v_x[1] + dv[1])
        return (
            f[0] + g[0][0] * u[0] + g[0][1] * u[1],
            f[1] + g[1][0] * u[0] + g[1][1] * u[1],
        )

    prev_v = None
    prev_s = 0.0
    for k in range(n + 1):
        t = k * h
        err = error_state(x1, x2, traj.desired(t))
        s = sliding_surface(err, run_gains.c)
        s_norm = math.hypot(s[0], s[1])
        v_x_lyap = 0.5 * (s[0] * s[0] + s[1] * s[1])
        v_trace.append(v_x_lyap)
        f, g = fx_gx(x1, x2, limb)
        norm = _spectral_norm(g)
        if norm > g0_run:
            g0_run = norm
        if prev_v is not None and min(prev_s, s_norm) > band:
            checked += 1
            if not v_x_lyap < prev_v:
                violations += 1
        prev_v = v_x_lyap
        prev_s = s_norm
        if k == n:
            break
        # command held across the step; refreshed every step
        v_x = smc_law(err, f, g, run_gains)

        def rhs(x1v: Vec2, x2v: Vec2, tv: float) -> tuple[Vec2, Vec2]:
            return (x2v, accel(x1v, x2v, v_x, tv))

        k1a, k1b = rhs(x1, x2, t)
        hh = 0.5 * h
        k2a, k2b = rhs((x1[0] + hh * k1a[0], x1[1] + hh * k1a[1]),
                       (x2[0] + hh * k1b[0], x2[1] + hh * k1b[1]), t + hh)
        k3a, k3b = rhs((x1[0] + hh * k2a[0], x1[1] + hh * k2a[1]),
                       (x2[0] + hh * k2b[0], x2[1] + hh * k2b[1]), t + hh)
        k4a, k4b = rhs((x1[0] + h * k3a[0], x1[1] + h * k3a[1]),
                       (x2[0] + h * k3b[0], x2[1] + h * k3b[1]), t + h)
        w = h / 6.0
        x1 = (x1[0] + w * (k1a[0] + 2.0 * (k2a[0] + k3a[0]) + k4a[0]),
              x1[1] + w * (k1a[1] + 2.0 * (k2a[1] + k3a[1]) + k4a[1]))
        x2 = (x2[0] + w * (k1b[0] + 2.0 * (k2b[0] + k3b[0]) + k4b[0]),
              x2[1] + w * (k1b[1] + 2.0 * (k2b[1] + k3b[1]) + k4b[1]))

    return ReachingResult(
        seed=seed,
        g0=g0,
        g0_run=g0_run,
        rho=rho,
        violations=violations,
        checked=checked,
        final_s_norm=prev_s,
        v_trace=v_trace,
    )


def reaching_sweep(seeds, **kwargs) -> list[ReachingResult]:
    """Run :func:`reaching_run` for every seed with one shared g0 bound."""
    if "g0" not in kwargs:
        limb = kwargs.get("limb") or default_limb_params()
        traj = kwargs.get("traj") or GaitSpec()
        setup = kwargs.get("setup") or ReachingSetup()
        kwargs = dict(kwargs)
        kwargs["g0"] = gain_bound(limb, traj, setup.duration,
                                  setup.pose_margin)
    return [reaching_run(seed, **kwargs) for seed in seeds]
