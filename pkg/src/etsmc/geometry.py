"""SEA mounting-triangle kinematics.

Each actuator spans a triangle between the joint axis O, the frame
anchor A, and the crank tip B on the joint lever.  With anchor distance
``a = |OA|``, lever ``b = |OB|``, and included angle ``beta`` at O, the
spring length is the third side:

    L_S = sqrt(a^2 + b^2 - 2 a b cos(beta))

For joint 1 the included angle is ``pi/2 - sigma1 + theta1 - alpha1``
and for joint 2 it is ``pi - sigma2 + theta2 - alpha2``.  The same
lengths follow from the anchor offset projections, which is the form
used in the closed-form derivative below.  The moment angle ``gamma``
is the interior angle at B between the spring line and the lever; by
the sine rule ``sin(gamma) = a sin(beta) / L_S``, and the joint torque
produced by a spring force F along the line is ``F * b * sin(gamma)``.
"""

from __future__ import annotations

import math

from .errors import DegenerateGeometryError
from .params import LimbParams

Vec2 = tuple[float, float]

# Triangles thinner than this are treated as collapsed.
_MIN_LENGTH = 1e-12


def included_angles(theta: Vec2, p: LimbParams) -> Vec2:
    """Included angle at the joint axis for both actuator triangles [rad]."""
    beta1 = 0.5 * math.pi - p.sigma1 + theta[0] - p.alpha1
    beta2 = math.pi - p.sigma2 + theta[1] - p.alpha2
    return (beta1, beta2)


def sea_length(theta: Vec2, p: LimbParams) -> Vec2:
    """Spring lengths of both actuators via the projection form.

    Parameters
    ----------
    theta:
        Joint angles (theta1, theta2) [rad].

    Returns
    -------
    (L_S1, L_S2) in metres, both strictly positive.

    Raises
    ------
    DegenerateGeometryError
        If a mounting triangle collapses to zero length.
    """
    q1 = theta[0] - p.alpha1
    sq1 = p.dim4 * p.dim4 + p.dim3 * p.dim3 - 2.0 * p.dim4 * (
        p.dim2 * math.cos(q1) - p.dim1 * math.sin(q1)
    )
    q2 = p.alpha2 - theta[1]
    sq2 = p.dim9 * p.dim9 + p.dim8 * p.dim8 - 2.0 * p.dim9 * (
        p.dim7 * math.sin(q2) - p.dim6 * math.cos(q2)
    )
    if sq1 < _MIN_LENGTH * _MIN_LENGTH or sq2 < _MIN_LENGTH * _MIN_LENGTH:
        raise DegenerateGeometryError(
            f"spring length collapsed at theta={theta!r}"
        )
    return (math.sqrt(sq1), math.sqrt(sq2))


def sea_length_included_angle(theta: Vec2, p: LimbParams) -> Vec2:
    """Spring lengths via the law of cosines on the mounting triangle.

    Agrees with :func:`sea_length` whenever the projection entries
    satisfy the ``dim = anchor * cos/sin(sigma)`` convention.
    """
    beta1, beta2 = included_angles(theta, p)
    sq1 = p.dim3 * p.dim3 + p.dim4 * p.dim4 - 2.0 * p.dim3 * p.dim4 * math.cos(beta1)
    sq2 = p.dim8 * p.dim8 + p.dim9 * p.dim9 - 2.0 * p.dim8 * p.dim9 * math.cos(beta2)
    if sq1 < _MIN_LENGTH * _MIN_LENGTH or sq2 < _MIN_LENGTH * _MIN_LENGTH:
        raise DegenerateGeometryError(
            f"spring length collapsed at theta={theta!r}"
        )
    return (math.sqrt(sq1), math.sqrt(sq2))


def moment_angle(theta: Vec2, p: LimbParams) -> tuple[Vec2, Vec2]:
    """Moment angles of both actuators.

    Returns
    -------
    (gamma, sin_gamma):
        ``gamma`` holds the interior angles at the crank tip [rad],
        obtained from the law of cosines so obtuse configurations are
        represented correctly.  ``sin_gamma`` holds the sine-rule values
        ``a sin(beta) / L_S`` used by the torque map.
    """
    ls1, ls2 = sea_length(theta, p)
    beta1, beta2 = included_angles(theta, p)
    sin1 = p.dim3 * math.sin(beta1) / ls1
    sin2 = p.dim8 * math.sin(beta2) / ls2
    # Interior angle at B from side lengths; clamp for roundoff at the
    # triangle inequality boundary.
    cos1 = (ls1 * ls1 + p.dim4 * p.dim4 - p.dim3 * p.dim3) / (2.0 * ls1 * p.dim4)
    cos2 = (ls2 * ls2 + p.dim9 * p.dim9 - p.dim8 * p.dim8) / (2.0 * ls2 * p.dim9)
    g1 = math.acos(min(1.0, max(-1.0, cos1)))
    g2 = math.acos(min(1.0, max(-1.0, cos2)))
    return ((g1, g2), (sin1, sin2))


def sea_jacobian(theta: Vec2, p: LimbParams) -> Vec2:
    """Closed-form derivative of each spring length in its own joint angle.

    The map is diagonal: actuator ``i`` spans only joint ``i``.  Values
    are d(L_Si)/d(theta_i) in m/rad, differentiated from the projection
    form of :func:`sea_length`.
    """
    ls1, ls2 = sea_length(theta, p)
    q1 = theta[0] - p.alpha1
    j1 = p.dim4 * (p.dim2 * math.sin(q1) + p.dim1 * math.cos(q1)) / ls1
    q2 = p.alpha2 - theta[1]
    j2 = p.dim9 * (p.dim7 * math.cos(q2) + p.dim6 * math.sin(q2)) / ls2
    return (j1, j2)


def sea_jacobian_dot(theta: Vec2, omega: Vec2, p: LimbParams,
                     step: float = 1e-6) -> Vec2:
    """Time derivative of the jacobian entries via a central difference.

    ``step`` is the angular perturbation [rad] applied per joint.
    """
    jp1 = sea_jacobian((theta[0] + step, theta[1]), p)[0]
    jm1 = sea_jacobian((theta[0] - step, theta[1]), p)[0]
    jp2 = sea_jacobian((theta[0], theta[1] + step), p)[1]
    jm2 = sea_jacobian((theta[0], theta[1] - step), p)[1]
    return (
        (jp1 - jm1) / (2.0 * step) * omega[0],
        (jp2 - jm2) / (2.0 * step) * omega[1],
    )
