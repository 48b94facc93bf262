"""Sliding-mode outer loop and backstepping voltage synthesis.

The outer loop treats the spring deformation vector as a virtual input
to the joint dynamics.  With tracking errors x~1 = theta - x_d and
x~2 = omega - d(x_d)/dt, the sliding surface is

    s = c x~1 + x~2

and the deformation command that forces s toward zero is

    v_x = g_x^-1 (-f_x + dd(x_d) - c x~2 - rho sgn(s))

Between trigger instants the controller keeps using the command frozen
at the last trigger.  Two backstepping stages then steer the physical
deformation z1 and its rate z2 to that command through the nut voltage:

    v1  = k_p1 (v_x(t_i) - z1) + d(v_x)/dt|_(t_i) - g_x^T s
    U_v = g2^-1 (-f2 + k_p2 (v1 - z2) + d(v1)/dt + (v_x(t_i) - z1))

with g2 = -1, f2 = F_R + damping * d(r)/dt, the held command treated as
constant (d(v_x)/dt|_(t_i) = 0), and d(v1)/dt estimated by a backward
difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import Mat2
from .errors import ConfigError, NearSingularActuationError
from .geometry import Vec2

# An 8-entry flattening of the 2x4 extended error matrix [X~ X_d].
Epsilon = tuple[float, float, float, float, float, float, float, float]


@dataclass(frozen=True)
class GainSet:
    """Controller gains shared by both triggering modes."""

    c: float = 30.0
    rho: float = 2.0
    k_p1: float = 30.0
    k_p2: float = 60.0
    boundary_layer: float = 0.2  # rad/s half-width; 0 keeps the pure sign law

    def validate(self) -> None:
        for name in ("c", "rho", "k_p1", "k_p2"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"gains.{name} must be strictly positive")
        if self.boundary_layer < 0.0:
            raise ConfigError("gains.boundary_layer must be non-negative")


@dataclass(frozen=True)
class ErrorState:
    """Tracking errors and the reference values they were measured against."""

    x_tilde1: Vec2
    x_tilde2: Vec2
    x_d: Vec2
    x_d_dot: Vec2
    x_d_ddot: Vec2


@dataclass(frozen=True)
class HeldSnapshot:
    """Quantities frozen at the most recent trigger instant."""

    epsilon: Epsilon
    v_x: Vec2
    time: float


def error_state(theta: Vec2, omega: Vec2,
                traj: tuple[Vec2, Vec2, Vec2]) -> ErrorState:
    x_d, x_d_dot, x_d_ddot = traj
    return ErrorState(
        x_tilde1=(theta[0] - x_d[0], theta[1] - x_d[1]),
        x_tilde2=(omega[0] - x_d_dot[0], omega[1] - x_d_dot[1]),
        x_d=x_d,
        x_d_dot=x_d_dot,
        x_d_ddot=x_d_ddot,
    )


def extended_error(err: ErrorState) -> Epsilon:
    """Flattened extended error matrix [x~1 x~2 x_d d(x_d)/dt]."""
    return (
        err.x_tilde1[0], err.x_tilde1[1],
        err.x_tilde2[0], err.x_tilde2[1],
        err.x_d[0], err.x_d[1],
        err.x_d_dot[0], err.x_d_dot[1],
    )


def x_tilde_norm(err: ErrorState) -> float:
    """Frobenius norm of the error block [x~1 x~2]."""
    a, b = err.x_tilde1
    c, d = err.x_tilde2
    return math.sqrt(a * a + b * b + c * c + d * d)


def sliding_surface(err: ErrorState, c: float) -> Vec2:
    """s = c x~1 + x~2."""
    return (
        c * err.x_tilde1[0] + err.x_tilde2[0],
        c * err.x_tilde1[1] + err.x_tilde2[1],
    )


def _switch(si: float, rho: float, boundary_layer: float) -> float:
    # sgn(0) = 0 keeps the law well defined on the surface.
    if boundary_layer > 0.0 and abs(si) < boundary_layer:
        return rho * si / boundary_layer
    if si > 0.0:
        return rho
    if si < 0.0:
        return -rho
    return 0.0


def smc_law(err: ErrorState, f_x: Vec2, g_x: Mat2, gains: GainSet) -> Vec2:
    """Deformation command of the reaching law at the current state.

    Solves g_x v_x = -f_x + dd(x_d) - c x~2 - rho sgn(s) for v_x.

    Raises
    ------
    NearSingularActuationError
        If g_x is not invertible at this configuration.
    """
    s = sliding_surface(err, gains.c)
    rhs = (
        -f_x[0] + err.x_d_ddot[0] - gains.c * err.x_tilde2[0]
        - _switch(s[0], gains.rho, gains.boundary_layer),
        -f_x[1] + err.x_d_ddot[1] - gains.c * err.x_tilde2[1]
        - _switch(s[1], gains.rho, gains.boundary_layer),
    )
    (a, b), (c_, d) = g_x
    det = a * d - b * c_
    if det == 0.0 or not math.isfinite(det):
        raise NearSingularActuationError("g_x is singular")
    return (
        (d * rhs[0] - b * rhs[1]) / det,
        (-c_ * rhs[0] + a * rhs[1]) / det,
    )


def backstep_stage1(v_x_held: Vec2, z1: Vec2, s: Vec2, g_x: Mat2,
                    k_p1: float) -> Vec2:
    """Deformation-rate command v1; the held v_x has zero derivative."""
    gts = (
        g_x[0][0] * s[0] + g_x[1][0] * s[1],
        g_x[0][1] * s[0] + g_x[1][1] * s[1],
    )
    return (
        k_p1 * (v_x_held[0] - z1[0]) - gts[0],
        k_p1 * (v_x_held[1] - z1[1]) - gts[1],
    )


def backstep_stage2(v_x_held: Vec2, z1: Vec2, z2: Vec2, v1: Vec2,
                    v1_dot: Vec2, f2: Vec2, k_p2: float) -> Vec2:
    """Nut voltage command; the deformation input gain g2 is -1."""
    return (
        f2[0] - k_p2 * (v1[0] - z2[0]) - v1_dot[0] - (v_x_held[0] - z1[0]),
        f2[1] - k_p2 * (v1[1] - z2[1]) - v1_dot[1] - (v_x_held[1] - z1[1]),
    )


def lyapunov_values(s: Vec2, e1: Vec2, e2: Vec2) -> tuple[float, float, float]:
    """Nested Lyapunov diagnostics (V_x, V_1, V_2).

    V_x = s^T s / 2, V_1 adds the stage-1 error e1 = v_x(t_i) - z1,
    V_2 adds the stage-2 error e2 = v1 - z2.
    """
    v_x = 0.5 * (s[0] * s[0] + s[1] * s[1])
    v_1 = v_x + 0.5 * (e1[0] * e1[0] + e1[1] * e1[1])
    v_2 = v_1 + 0.5 * (e2[0] * e2[0] + e2[1] * e2[1])
    return (v_x, v_1, v_2)
