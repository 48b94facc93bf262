"""Ball-screw series elastic actuator model.

The motor voltage command U_v drives the screw nut directly:

    dd(r_i) = U_v_i - damping * d(r_i)

The joint-side spring end sits at the ball-screw displacement
r_B_i = L_S_i(theta_i) - L_ref_i, measured from the reference pose, so
the spring deformation is delta_i = r_B_i - r_i and obeys

    dd(delta) = F_R + damping * d(r) - U_v,   F_R = dd(r_B)

which is the plant seen by the backstepping stages.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .geometry import Vec2, sea_jacobian, sea_jacobian_dot, sea_length
from .params import LimbParams


@dataclass(frozen=True)
class SeaParams:
    """Actuator-side constants.

    Attributes
    ----------
    damping:
        Back-EMF style velocity feedback on the nut [1/s].
    reference_lengths:
        Spring lengths at the reference pose [m]; r_B vanishes there.
    """

    damping: float = 48.0
    reference_lengths: Vec2 = (0.0, 0.0)

    def validate(self) -> None:
        if self.damping < 0.0:
            raise ConfigError("sea.damping must be non-negative")
        if any(l < 0.0 for l in self.reference_lengths):
            raise ConfigError("sea.reference_lengths must be non-negative")


@dataclass(frozen=True)
class SeaState:
    """Nut positions and velocities of both actuators."""

    position: Vec2 = (0.0, 0.0)
    velocity: Vec2 = (0.0, 0.0)


def reference_lengths_at(theta: Vec2, p: LimbParams) -> Vec2:
    """Spring lengths at ``theta``, for anchoring r_B to a pose."""
    return sea_length(theta, p)


def nut_accel(u_v: Vec2, nut_velocity: Vec2, sea: SeaParams) -> Vec2:
    """Nut accelerations U_v - damping * velocity [m/s^2]."""
    return (
        u_v[0] - sea.damping * nut_velocity[0],
        u_v[1] - sea.damping * nut_velocity[1],
    )


def end_effector_disp(theta: Vec2, p: LimbParams, sea: SeaParams) -> Vec2:
    """Ball-screw displacements r_B relative to the reference pose [m]."""
    ls = sea_length(theta, p)
    return (
        ls[0] - sea.reference_lengths[0],
        ls[1] - sea.reference_lengths[1],
    )


def deformation(theta: Vec2, nut_position: Vec2, p: LimbParams,
                sea: SeaParams) -> Vec2:
    """Spring deformations delta = r_B - r [m]."""
    rb = end_effector_disp(theta, p, sea)
    return (rb[0] - nut_position[0], rb[1] - nut_position[1])


def deformation_rate(theta: Vec2, omega: Vec2, nut_velocity: Vec2,
                     p: LimbParams) -> Vec2:
    """d(delta)/dt = J(theta) omega - d(r)/dt [m/s]."""
    j = sea_jacobian(theta, p)
    return (
        j[0] * omega[0] - nut_velocity[0],
        j[1] * omega[1] - nut_velocity[1],
    )


def end_effector_accel(theta: Vec2, omega: Vec2, accel: Vec2,
                       p: LimbParams) -> Vec2:
    """F_R = dd(r_B) = J dd(theta) + dJ/dt d(theta) [m/s^2]."""
    j = sea_jacobian(theta, p)
    jdot = sea_jacobian_dot(theta, omega, p)
    return (
        j[0] * accel[0] + jdot[0] * omega[0],
        j[1] * accel[1] + jdot[1] * omega[1],
    )
