"""Closed-loop simulation of the elastic limb under either trigger mode.

The plant state is the 8-tuple

    (theta1, theta2, omega1, omega2, r1, r2, rdot1, rdot2)

integrated with a fixed-step classic Runge-Kutta scheme.  The nut
voltage U_v is a zero-order hold between controller updates; the
deformation command v_x is refreshed only at trigger instants.  The
trigger rule is evaluated at sampling instants, never between them.

The integrator right-hand side exists twice: a modular reference built
from the dynamics/actuator functions, and a fused closure used in the
hot loop.  Both follow the same floating-point operation order, so
they agree bit for bit; a test pins that equivalence.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass

import numpy as np

from .actuator import (
    SeaParams,
    deformation,
    deformation_rate,
    end_effector_accel,
    nut_accel,
    reference_lengths_at,
)
from .control import (
    GainSet,
    HeldSnapshot,
    backstep_stage1,
    backstep_stage2,
    error_state,
    extended_error,
    sliding_surface,
    smc_law,
    x_tilde_norm,
)
from .dynamics import fx_gx, joint_accel
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    DivergenceError,
    EtsmcError,
    NearSingularActuationError,
    SingularInertiaError,
)
from .geometry import Vec2
from .params import LimbParams, default_limb_params
from .trajectory import GaitSpec
from .trigger import (
    TriggerParams,
    TriggerStats,
    event_error,
    should_trigger,
    threshold,
    zeno_bound,
)

State8 = tuple[float, float, float, float, float, float, float, float]

TIME_TRIGGERED = "time"
EVENT_TRIGGERED = "event"
HOLD_VX = "vx_only"
HOLD_FULL = "full_uv"

_MODE_ALIASES = {
    "time": TIME_TRIGGERED,
    "tt": TIME_TRIGGERED,
    "event": EVENT_TRIGGERED,
    "et": EVENT_TRIGGERED,
}

_MIN_SQ = 1e-24


def normalize_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode.lower()]
    except KeyError:
        raise ConfigError(f"unknown trigger mode {mode!r}") from None


@dataclass(frozen=True)
class DisturbanceSpec:
    """Band-limited torque disturbance, bounded by construction.

    Each joint receives a sum of ``harmonics`` sinusoids whose
    non-negative weights sum to ``amplitude``, so |d_i(t)| never
    exceeds ``amplitude`` at any instant.  Frequencies, phases, and
    weights are drawn once from the run seed.
    """

    amplitude: float = 0.01  # N m per joint
    harmonics: int = 3
    freq_min: float = 0.05  # Hz
    freq_max: float = 0.3

    def validate(self) -> None:
        if self.amplitude < 0.0 or not math.isfinite(self.amplitude):
            raise ConfigError("disturbance.amplitude must be finite and >= 0")
        if self.harmonics < 1:
            raise ConfigError("disturbance.harmonics must be at least 1")
        if not 0.0 < self.freq_min <= self.freq_max:
            raise ConfigError(
                "disturbance frequencies must satisfy 0 < freq_min <= freq_max"
            )


class Disturbance:
    """Realized disturbance: deterministic in (spec, seed, t)."""

    __slots__ = ("spec", "seed", "_terms1", "_terms2")

    def __init__(self, spec: DisturbanceSpec, seed: int):
        spec.validate()
        self.spec = spec
        self.seed = seed
        rng = np.random.Generator(np.random.PCG64(seed))
        terms = []
        for _ in range(2):
            freqs = rng.uniform(spec.freq_min, spec.freq_max, spec.harmonics)
            phases = rng.uniform(0.0, 2.0 * math.pi, spec.harmonics)
            raw = rng.uniform(0.2, 1.0, spec.harmonics)
            weights = raw / raw.sum() * spec.amplitude
            terms.append(tuple(
                (float(w), 2.0 * math.pi * float(f), float(ph))
                for w, f, ph in zip(weights, freqs, phases)
            ))
        self._terms1, self._terms2 = terms

    def torque(self, t: float) -> Vec2:
        d1 = 0.0
        for amp, ang, ph in self._terms1:
            d1 += amp * math.sin(ang * t + ph)
        d2 = 0.0
        for amp, ang, ph in self._terms2:
            d2 += amp * math.sin(ang * t + ph)
        return (d1, d2)

    def bound(self) -> float:
        return self.spec.amplitude


@dataclass(frozen=True)
class SimConfig:
    """Timing, seeding, and hold policy of a run.

    ``control_period`` is how often the backstepping stages recompute
    U_v from fresh plant measurements under the default ``vx_only``
    hold.  ``full_uv`` instead freezes U_v between trigger instants;
    that literal hold is only usable at much softer gains because the
    cross term -g_x^T s rotates the (s, e1) pair at roughly the
    largest singular value of g_x, and a zero-order hold goes unstable
    once that rate times the hold interval approaches one.
    """

    duration: float = 10.0
    sampling_period: float = 0.01
    control_period: float = 1e-3
    integration_step: float = 1e-3
    hold_mode: str = HOLD_VX
    seed: int = 2025
    divergence_norm: float = 1e6

    def validate(self) -> None:
        for name in ("duration", "sampling_period", "control_period",
                     "integration_step", "divergence_norm"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0.0
                    and math.isfinite(value)):
                raise ConfigError(f"sim.{name} must be finite and positive")
        if self.hold_mode not in (HOLD_VX, HOLD_FULL):
            raise ConfigError(
                f"sim.hold_mode must be {HOLD_VX!r} or {HOLD_FULL!r}"
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("sim.seed must be a non-negative integer")
        self.n_samples()
        self.substeps()
        self.control_stride()
        _int_ratio(self.sampling_period, self.control_period,
                   "sim.sampling_period / sim.control_period")

    def n_samples(self) -> int:
        return _int_ratio(self.duration, self.sampling_period,
                          "sim.duration / sim.sampling_period")

    def substeps(self) -> int:
        return _int_ratio(self.sampling_period, self.integration_step,
                          "sim.sampling_period / sim.integration_step")

    def control_stride(self) -> int:
        return _int_ratio(self.control_period, self.integration_step,
                          "sim.control_period / sim.integration_step")


def _int_ratio(num: float, den: float, what: str) -> int:
    ratio = num / den
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
        raise ConfigError(f"{what} must be a positive integer, got {ratio!r}")
    return n


@dataclass(frozen=True)
class PlantState:
    theta: Vec2
    omega: Vec2
    nut_position: Vec2
    nut_velocity: Vec2

    def as_tuple(self) -> State8:
        return (self.theta[0], self.theta[1],
                self.omega[0], self.omega[1],
                self.nut_position[0], self.nut_position[1],
                self.nut_velocity[0], self.nut_velocity[1])

    @staticmethod
    def from_tuple(y: State8) -> "PlantState":
        return PlantState(theta=(y[0], y[1]), omega=(y[2], y[3]),
                          nut_position=(y[4], y[5]),
                          nut_velocity=(y[6], y[7]))


@dataclass(frozen=True)
class TraceRecord:
    """One sampling instant of a run.

    ``x_tilde`` is the Frobenius norm of the tracking-error block; it
    is carried for analysis but is not part of the CSV contract.
    """

    t: float
    theta: Vec2
    theta_d: Vec2
    err: Vec2
    s_norm: float
    e_norm: float
    triggered: bool
    u_v: Vec2
    delta: Vec2
    v_x: float
    x_tilde: float = math.nan


@dataclass
class RunResult:
    mode: str
    records: list[TraceRecord]
    stats: TriggerStats
    threshold_value: float
    zeno_value: float
    runtime_s: float
    final_state: PlantState


def make_rhs(limb: LimbParams, sea: SeaParams, dist: Disturbance):
    """Fused right-hand side closure for the integrator hot loop.

    Follows the exact operation order of the modular path
    (sea_length -> spring_torque -> bias_vector -> MassMatrix.solve ->
    nut_accel) so results match it bit for bit.
    """
    m1, m2 = limb.m1, limb.m2
    I1, I2 = limb.I1, limb.I2
    L1, R1, R2 = limb.L1, limb.R1, limb.R2
    B1, B2, g = limb.B1, limb.B2, limb.g
    k1, k2 = limb.k1, limb.k2
    dim1, dim2, dim3, dim4 = limb.dim1, limb.dim2, limb.dim3, limb.dim4
    dim6, dim7, dim8, dim9 = limb.dim6, limb.dim7, limb.dim8, limb.dim9
    alpha1, alpha2 = limb.alpha1, limb.alpha2
    sigma1, sigma2 = limb.sigma1, limb.sigma2
    ref1, ref2 = sea.reference_lengths
    damping = sea.damping
    torque = dist.torque
    sin = math.sin
    cos = math.cos
    sqrt = math.sqrt

    def rhs(y: State8, t: float, u1: float, u2: float) -> State8:
        th1 = y[0]
        th2 = y[1]
        w1 = y[2]
        w2 = y[3]
        r1 = y[4]
        r2 = y[5]
        rv1 = y[6]
        rv2 = y[7]
        qa = th1 - alpha1
        sqa = dim4 * dim4 + dim3 * dim3 - 2.0 * dim4 * (
            dim2 * cos(qa) - dim1 * sin(qa)
        )
        qb = alpha2 - th2
        sqb = dim9 * dim9 + dim8 * dim8 - 2.0 * dim9 * (
            dim7 * sin(qb) - dim6 * cos(qb)
        )
        if not (sqa > _MIN_SQ and sqb > _MIN_SQ):
            raise DegenerateGeometryError(
                f"spring length collapsed at theta=({th1!r}, {th2!r})"
            )
        ls1 = sqrt(sqa)
        ls2 = sqrt(sqb)
        beta1 = 0.5 * math.pi - sigma1 + th1 - alpha1
        beta2 = math.pi - sigma2 + th2 - alpha2
        sing1 = dim3 * sin(beta1) / ls1
        sing2 = dim8 * sin(beta2) / ls2
        delta1 = ls1 - ref1 - r1
        delta2 = ls2 - ref2 - r2
        tau1 = -k1 * delta1 * dim4 * sing1
        tau2 = -k2 * delta2 * dim9 * sing2
        c2 = cos(th2)
        m2r2 = m2 * R2 * R2
        coupling = m2 * L1 * R2 * c2
        m11 = m1 * R1 * R1 + I1 + m2 * L1 * L1 + m2r2 + 2.0 * coupling
        m12 = m2r2 + coupling
        m22 = m2r2 + I2
        det = m11 * m22 - m12 * m12
        if det <= 0.0 or not math.isfinite(det):
            raise SingularInertiaError(f"mass matrix determinant {det!r}")
        s1 = sin(th1)
        s2 = sin(th2)
        srel = sin(th2 - th1)
        m2l1r2 = m2 * L1 * R2
        n1 = (
            -m1 * g * R1 * s1
            - m2 * g * L1 * s1
            + m2 * g * R2 * srel
            - m2l1r2 * s2 * (w2 * w2 - 2.0 * w1 * w2)
            - B1 * w1
        )
        n2 = (
            -m2 * g * R2 * srel
            - m2l1r2 * w1 * w1 * s2
            - B2 * w2
        )
        d1, d2 = torque(t)
        rhs1 = tau1 + n1 + d1
        rhs2 = tau2 + n2 + d2
        a1 = (m22 * rhs1 + m12 * rhs2) / det
        a2 = (m12 * rhs1 + m11 * rhs2) / det
        return (w1, w2, a1, a2, rv1, rv2,
                u1 - damping * rv1, u2 - damping * rv2)

    return rhs


def reference_rhs(y: State8, t: float, u_v: Vec2, limb: LimbParams,
                  sea: SeaParams, dist: Disturbance) -> State8:
    """Modular right-hand side; the fused closure must match it exactly."""
    theta = (y[0], y[1])
    omega = (y[2], y[3])
    nut_r = (y[4], y[5])
    nut_v = (y[6], y[7])
    delta = deformation(theta, nut_r, limb, sea)
    acc = joint_accel(theta, omega, delta, dist.torque(t), limb)
    na = nut_accel(u_v, nut_v, sea)
    return (omega[0], omega[1], acc[0], acc[1],
            nut_v[0], nut_v[1], na[0], na[1])


def rk4_step(y: State8, t: float, h: float, u_v: Vec2, rhs) -> State8:
    """One classic fourth-order step with U_v held over the step."""
    u1, u2 = u_v
    a = rhs(y, t, u1, u2)
    hh = 0.5 * h
    yb = (y[0] + hh * a[0], y[1] + hh * a[1], y[2] + hh * a[2],
          y[3] + hh * a[3], y[4] + hh * a[4], y[5] + hh * a[5],
          y[6] + hh * a[6], y[7] + hh * a[7])
    b = rhs(yb, t + hh, u1, u2)
    yc = (y[0] + hh * b[0], y[1] + hh * b[1], y[2] + hh * b[2],
          y[3] + hh * b[3], y[4] + hh * b[4], y[5] + hh * b[5],
          y[6] + hh * b[6], y[7] + hh * b[7])
    c = rhs(yc, t + hh, u1, u2)
    yd = (y[0] + h * c[0], y[1] + h * c[1], y[2] + h * c[2],
          y[3] + h * c[3], y[4] + h * c[4], y[5] + h * c[5],
          y[6] + h * c[6], y[7] + h * c[7])
    d = rhs(yd, t + h, u1, u2)
    w = h / 6.0
    return (
        y[0] + w * (a[0] + 2.0 * (b[0] + c[0]) + d[0]),
        y[1] + w * (a[1] + 2.0 * (b[1] + c[1]) + d[1]),
        y[2] + w * (a[2] + 2.0 * (b[2] + c[2]) + d[2]),
        y[3] + w * (a[3] + 2.0 * (b[3] + c[3]) + d[3]),
        y[4] + w * (a[4] + 2.0 * (b[4] + c[4]) + d[4]),
        y[5] + w * (a[5] + 2.0 * (b[5] + c[5]) + d[5]),
        y[6] + w * (a[6] + 2.0 * (b[6] + c[6]) + d[6]),
        y[7] + w * (a[7] + 2.0 * (b[7] + c[7]) + d[7]),
    )


def initial_state(traj, limb: LimbParams) -> PlantState:
    """Start on the reference with the nut backed off to pre-tension.

    The nut positions are the negated static preload, so the springs carry
    the limb from the first instant.
    """
    x_d, x_d_dot, _ = traj.desired(0.0)
    preload = static_preload(traj, limb)
    return PlantState(theta=x_d, omega=x_d_dot,
                      nut_position=(-preload[0], -preload[1]),
                      nut_velocity=(0.0, 0.0))


def static_preload(traj, limb: LimbParams) -> Vec2:
    """Deformation that balances gravity and the initial reference accel.

    Solving g_x * delta = x_d_ddot(0) - f_x at the starting pose puts the
    plant exactly on the reference at t = 0: zero tracking error, zero error
    rate, and joint acceleration equal to the commanded one.  Without the
    pre-tension the limb free-falls until the nut has built up the static
    deformation, and that transient is what the deformation subsystem can
    never chase down.
    """
    x_d, x_d_dot, x_d_ddot = traj.desired(0.0)
    f, g = fx_gx(x_d, x_d_dot, limb)
    r0 = x_d_ddot[0] - f[0]
    r1 = x_d_ddot[1] - f[1]
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    if det == 0.0 or not math.isfinite(det):
        raise NearSingularActuationError(
            "cannot pre-tension the springs: deformation map is singular "
            "at the starting pose"
        )
    return ((g[1][1] * r0 - g[0][1] * r1) / det,
            (g[0][0] * r1 - g[1][0] * r0) / det)


def _check_state(y: State8, t: float, bound: float) -> None:
    for value in y:
        if not math.isfinite(value) or abs(value) > bound:
            raise DivergenceError(
                f"state left the trust region at t={t:.6g}: {y!r}"
            )


def run(mode: str, *, limb: LimbParams | None = None,
        gains: GainSet | None = None,
        trigger_params: TriggerParams | None = None,
        traj=None, sim: SimConfig | None = None,
        disturbance: DisturbanceSpec | None = None,
        damping: float = 48.0) -> RunResult:
    """Simulate one closed-loop run and return its sampled trace.

    Raises
    ------
    ConfigError
        On invalid parameters or mismatched sliding-surface gains.
    DivergenceError
        If the state norm leaves the configured trust region.
    """
    mode = normalize_mode(mode)
    limb = limb if limb is not None else default_limb_params()
    gains = gains if gains is not None else GainSet()
    trig = trigger_params if trigger_params is not None else TriggerParams()
    traj = traj if traj is not None else GaitSpec()
    sim = sim if sim is not None else SimConfig()
    dist_spec = disturbance if disturbance is not None else DisturbanceSpec()
    limb.validate()
    gains.validate()
    trig.validate()
    if hasattr(traj, "validate"):
        traj.validate()
    sim.validate()
    if not math.isclose(trig.c, gains.c, rel_tol=1e-12):
        raise ConfigError(
            "trigger.c must equal gains.c; the threshold is derived from "
            "the sliding-surface gain"
        )

    start = initial_state(traj, limb)
    ref = reference_lengths_at(start.theta, limb)
    sea = SeaParams(damping=damping, reference_lengths=ref)
    sea.validate()
    dist = Disturbance(dist_spec, sim.seed)
    rhs = make_rhs(limb, sea, dist)

    n_samples = sim.n_samples()
    substeps = sim.substeps()
    stride = sim.control_stride()
    h = sim.integration_step
    sampling = sim.sampling_period
    hold_full = sim.hold_mode == HOLD_FULL

    stats = TriggerStats(sampling_period=sampling)
    records: list[TraceRecord] = []
    y = start.as_tuple()
    snap: HeldSnapshot | None = None
    u_v: Vec2 = (0.0, 0.0)
    v1_prev: Vec2 | None = None
    v1_prev_time = 0.0

    def control_update(y_now: State8, t_now: float,
                       held: HeldSnapshot) -> tuple[Vec2, Vec2, Vec2]:
        nonlocal v1_prev, v1_prev_time
        theta = (y_now[0], y_now[1])
        omega = (y_now[2], y_now[3])
        nut_r = (y_now[4], y_now[5])
        nut_v = (y_now[6], y_now[7])
        z1 = deformation(theta, nut_r, limb, sea)
        z2 = deformation_rate(theta, omega, nut_v, limb)
        err = error_state(theta, omega, traj.desired(t_now))
        s = sliding_surface(err, gains.c)
        _, g_x = fx_gx(theta, omega, limb)
        v1 = backstep_stage1(held.v_x, z1, s, g_x, gains.k_p1)
        if v1_prev is None:
            v1_dot: Vec2 = (0.0, 0.0)
        else:
            dt = t_now - v1_prev_time
            if dt > 0.0:
                v1_dot = ((v1[0] - v1_prev[0]) / dt,
                          (v1[1] - v1_prev[1]) / dt)
            else:
                v1_dot = (0.0, 0.0)
        # feedforward F_R from the nominal (disturbance-free) accelerations
        accel_nom = joint_accel(theta, omega, z1, (0.0, 0.0), limb)
        f_r = end_effector_accel(theta, omega, accel_nom, limb)
        f2 = (f_r[0] + sea.damping * nut_v[0],
              f_r[1] + sea.damping * nut_v[1])
        u_new = backstep_stage2(held.v_x, z1, z2, v1, v1_dot, f2, gains.k_p2)
        v1_prev = v1
        v1_prev_time = t_now
        return u_new, z1, s

    wall_start = _time.perf_counter()
    for k in range(n_samples):
        t_k = k * sampling
        _check_state(y, t_k, sim.divergence_norm)
        theta = (y[0], y[1])
        omega = (y[2], y[3])
        err = error_state(theta, omega, traj.desired(t_k))
        eps_now = extended_error(err)
        xt = x_tilde_norm(err)
        s = sliding_surface(err, gains.c)
        s_norm = math.hypot(s[0], s[1])
        if mode == TIME_TRIGGERED:
            triggered = True
        else:
            triggered = snap is None or should_trigger(
                event_error(snap.epsilon, eps_now), xt, trig
            )
        if triggered:
            f_x, g_x = fx_gx(theta, omega, limb)
            v_x = smc_law(err, f_x, g_x, gains)
            snap = HeldSnapshot(epsilon=eps_now, v_x=v_x, time=t_k)
            e_norm = 0.0
        else:
            assert snap is not None
            e_norm = event_error(snap.epsilon, eps_now)
        stats.record_step(t_k, triggered)
        if triggered or not hold_full:
            u_v, delta_k, _ = control_update(y, t_k, snap)
        else:
            delta_k = deformation(theta, (y[4], y[5]), limb, sea)
        records.append(TraceRecord(
            t=t_k, theta=theta, theta_d=err.x_d, err=err.x_tilde1,
            s_norm=s_norm, e_norm=e_norm, triggered=triggered,
            u_v=u_v, delta=delta_k,
            v_x=0.5 * (s[0] * s[0] + s[1] * s[1]),
            x_tilde=xt,
        ))
        try:
            for j in range(substeps):
                if j and not hold_full and j % stride == 0:
                    u_v, _, _ = control_update(y, t_k + j * h, snap)
                y = rk4_step(y, t_k + j * h, h, u_v, rhs)
        except EtsmcError:
            # a blow-up inside the window surfaces as geometry or
            # inertia trouble first; report it as divergence when the
            # state really has left the trust region
            _check_state(y, t_k, sim.divergence_norm)
            raise
    t_end = n_samples * sampling
    _check_state(y, t_end, sim.divergence_norm)
    runtime = _time.perf_counter() - wall_start

    return RunResult(
        mode=mode,
        records=records,
        stats=stats,
        threshold_value=threshold(trig),
        zeno_value=zeno_bound(trig),
        runtime_s=runtime,
        final_state=PlantState.from_tuple(y),
    )


@dataclass
class ComparisonOutcome:
    time_result: RunResult
    event_result: RunResult


def compare(*, limb: LimbParams | None = None, gains: GainSet | None = None,
            trigger_params: TriggerParams | None = None, traj=None,
            sim: SimConfig | None = None,
            disturbance: DisturbanceSpec | None = None,
            damping: float = 48.0) -> ComparisonOutcome:
    """Run both trigger modes on the same plant, seed, and reference."""
    kwargs = dict(limb=limb, gains=gains, trigger_params=trigger_params,
                  traj=traj, sim=sim, disturbance=disturbance,
                  damping=damping)
    return ComparisonOutcome(
        time_result=run(TIME_TRIGGERED, **kwargs),
        event_result=run(EVENT_TRIGGERED, **kwargs),
    )
