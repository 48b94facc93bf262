"""Rigid-body dynamics of the two-link limb.

The links form a double compound pendulum hanging from the hip.  With
joint angles theta = (theta1, theta2) and rates omega, the model is

    M(theta2) @ dd(theta) = tau_S + N(theta, omega) + d

where tau_S are the SEA joint torques, N collects gravity, Coriolis,
centrifugal, and viscous friction effects, and d are bounded joint
disturbance torques.  The inertia couplings enter with negated
off-diagonal entries:

    M = [[M11, -M12],
         [-M21, M22]]

    M11 = m1 R1^2 + I1 + m2 L1^2 + m2 R2^2 + 2 m2 L1 R2 cos(theta2)
    M12 = M21 = m2 R2^2 + m2 L1 R2 cos(theta2)
    M22 = m2 R2^2 + I2

The control design uses the drift/input split of the same dynamics:

    dd(theta) = f_x + g_x (v_x + d_v)

with f_x = M^-1 N, g_x = M^-1 diag(-k1 dim4 sin g1, -k2 dim9 sin g2),
v_x the spring deformation vector, and d_v the torque disturbance
mapped through the actuation channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NearSingularActuationError, SingularInertiaError
from .geometry import Vec2, moment_angle
from .params import LimbParams

Mat2 = tuple[Vec2, Vec2]

# Moment arms below this are not invertible through the actuation map.
_MIN_MOMENT_ARM = 1e-9


@dataclass(frozen=True)
class MassMatrix:
    """Inertia matrix entries; ``m12`` and ``m21`` share one evaluation."""

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def solve(self, rhs: Vec2) -> Vec2:
        """Solve ``[[m11, -m12], [-m21, m22]] @ x = rhs`` in closed form."""
        det = self.det
        if det <= 0.0 or not math.isfinite(det):
            raise SingularInertiaError(f"mass matrix determinant {det!r}")
        return (
            (self.m22 * rhs[0] + self.m12 * rhs[1]) / det,
            (self.m21 * rhs[0] + self.m11 * rhs[1]) / det,
        )


def mass_matrix(theta2: float, p: LimbParams) -> MassMatrix:
    """Configuration-dependent inertia entries at knee angle ``theta2``."""
    c2 = math.cos(theta2)
    m2r2 = p.m2 * p.R2 * p.R2
    coupling = p.m2 * p.L1 * p.R2 * c2
    m11 = p.m1 * p.R1 * p.R1 + p.I1 + p.m2 * p.L1 * p.L1 + m2r2 + 2.0 * coupling
    m12 = m2r2 + coupling
    m22 = m2r2 + p.I2
    return MassMatrix(m11=m11, m12=m12, m21=m12, m22=m22)


def bias_vector(theta: Vec2, omega: Vec2, p: LimbParams) -> Vec2:
    """Gravity, velocity coupling, and friction torques N = (N1, N2)."""
    th1, th2 = theta
    w1, w2 = omega
    s1 = math.sin(th1)
    s2 = math.sin(th2)
    srel = math.sin(th2 - th1)
    m2l1r2 = p.m2 * p.L1 * p.R2
    n1 = (
        -p.m1 * p.g * p.R1 * s1
        - p.m2 * p.g * p.L1 * s1
        + p.m2 * p.g * p.R2 * srel
        - m2l1r2 * s2 * (w2 * w2 - 2.0 * w1 * w2)
        - p.B1 * w1
    )
    n2 = (
        -p.m2 * p.g * p.R2 * srel
        - m2l1r2 * w1 * w1 * s2
        - p.B2 * w2
    )
    return (n1, n2)


def spring_torque(delta: Vec2, theta: Vec2, p: LimbParams) -> Vec2:
    """Joint torques produced by the spring deformations ``delta`` [N m].

    tau_i = -k_i * delta_i * lever_i * sin(gamma_i), where the moment
    angle gamma_i follows from the mounting triangle at ``theta``.
    """
    _, (sin1, sin2) = moment_angle(theta, p)
    return (
        -p.k1 * delta[0] * p.dim4 * sin1,
        -p.k2 * delta[1] * p.dim9 * sin2,
    )


def fx_gx(theta: Vec2, omega: Vec2, p: LimbParams) -> tuple[Vec2, Mat2]:
    """Drift vector f_x and input matrix g_x of the deformation channel.

    Returns
    -------
    f_x:
        M^-1 N, the unforced joint accelerations [rad/s^2].
    g_x:
        M^-1 diag(-k1 dim4 sin g1, -k2 dim9 sin g2) as row tuples;
        multiplies spring deformations [m] into accelerations.
    """
    mm = mass_matrix(theta[1], p)
    f_x = mm.solve(bias_vector(theta, omega, p))
    _, (sin1, sin2) = moment_angle(theta, p)
    a1 = -p.k1 * p.dim4 * sin1
    a2 = -p.k2 * p.dim9 * sin2
    col1 = mm.solve((a1, 0.0))
    col2 = mm.solve((0.0, a2))
    g_x: Mat2 = ((col1[0], col2[0]), (col1[1], col2[1]))
    return f_x, g_x


def map_disturbance(d_torque: Vec2, theta: Vec2, p: LimbParams) -> Vec2:
    """Torque disturbances re-expressed in the deformation channel [m].

    d_v_i = -d_i / (k_i * lever_i * sin(gamma_i)), so that
    g_x @ d_v = M^-1 d.

    Raises
    ------
    NearSingularActuationError
        If a moment arm is too close to zero to divide by.
    """
    _, (sin1, sin2) = moment_angle(theta, p)
    a1 = p.k1 * p.dim4 * sin1
    a2 = p.k2 * p.dim9 * sin2
    if abs(a1) < _MIN_MOMENT_ARM or abs(a2) < _MIN_MOMENT_ARM:
        raise NearSingularActuationError(
            f"moment arm vanished at theta={theta!r}"
        )
    return (-d_torque[0] / a1, -d_torque[1] / a2)


def joint_accel(theta: Vec2, omega: Vec2, delta: Vec2, d_torque: Vec2,
                p: LimbParams) -> Vec2:
    """Joint accelerations M^-1 (tau_S + N + d) [rad/s^2]."""
    mm = mass_matrix(theta[1], p)
    tau = spring_torque(delta, theta, p)
    n = bias_vector(theta, omega, p)
    return mm.solve((tau[0] + n[0] + d_torque[0], tau[1] + n[1] + d_torque[1]))
