import math

import pytest
from hypothesis import given, strategies as st

from etsmc.errors import DegenerateGeometryError
from etsmc.geometry import (
    included_angles,
    moment_angle,
    sea_jacobian,
    sea_jacobian_dot,
    sea_length,
    sea_length_included_angle,
)
from etsmc.params import LimbParams

P = LimbParams()

angles = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


@given(angles, angles)
def test_length_forms_agree(th1, th2):
    # projection form and law-of-cosines form are the same triangle
    a = sea_length((th1, th2), P)
    b = sea_length_included_angle((th1, th2), P)
    assert math.isclose(a[0], b[0], rel_tol=1e-12)
    assert math.isclose(a[1], b[1], rel_tol=1e-12)


@given(angles, angles)
def test_lengths_positive_near_anchor_distance(th1, th2):
    ls = sea_length((th1, th2), P)
    # lever is 1% of the anchor distance, so lengths stay in a tight band
    for val, anchor, lever in ((ls[0], P.dim3, P.dim4), (ls[1], P.dim8, P.dim9)):
        assert anchor - lever <= val <= anchor + lever


@given(angles, angles)
def test_moment_angle_sine_consistency(th1, th2):
    # law-of-cosines interior angle and sine-rule value describe the
    # same angle; the sine-rule form keeps the sign of sin(beta)
    (g1, g2), (sin1, sin2) = moment_angle((th1, th2), P)
    assert 0.0 <= g1 <= math.pi and 0.0 <= g2 <= math.pi
    # acos is ill-conditioned where sin(beta) vanishes, hence the loose band
    assert math.isclose(math.sin(g1), abs(sin1), abs_tol=1e-6)
    assert math.isclose(math.sin(g2), abs(sin2), abs_tol=1e-6)


@given(angles, angles)
def test_jacobian_is_torque_moment_arm(th1, th2):
    # energy consistency: dL_S/dtheta equals lever * sin(gamma), so the
    # spring torque map and the kinematic rate map share one moment arm
    j = sea_jacobian((th1, th2), P)
    _, (sin1, sin2) = moment_angle((th1, th2), P)
    assert math.isclose(j[0], P.dim4 * sin1, rel_tol=0.0, abs_tol=1e-15)
    assert math.isclose(j[1], P.dim9 * sin2, rel_tol=0.0, abs_tol=1e-15)


@given(angles, angles)
def test_jacobian_against_finite_difference(th1, th2):
    h = 1e-5
    j = sea_jacobian((th1, th2), P)
    fd1 = (sea_length((th1 + h, th2), P)[0]
           - sea_length((th1 - h, th2), P)[0]) / (2.0 * h)
    fd2 = (sea_length((th1, th2 + h), P)[1]
           - sea_length((th1, th2 - h), P)[1]) / (2.0 * h)
    assert math.isclose(j[0], fd1, abs_tol=5e-11)
    assert math.isclose(j[1], fd2, abs_tol=5e-11)


def test_jacobian_dot_matches_chain_rule():
    theta = (0.3, -0.4)
    omega = (1.7, -0.9)
    jd = sea_jacobian_dot(theta, omega, P)
    # independent check: dJ/dt = (dJ/dtheta) * omega with its own step
    h = 1e-7
    d1 = (sea_jacobian((theta[0] + h, theta[1]), P)[0]
          - sea_jacobian((theta[0] - h, theta[1]), P)[0]) / (2.0 * h)
    d2 = (sea_jacobian((theta[0], theta[1] + h), P)[1]
          - sea_jacobian((theta[0], theta[1] - h), P)[1]) / (2.0 * h)
    assert math.isclose(jd[0], d1 * omega[0], rel_tol=1e-4, abs_tol=1e-12)
    assert math.isclose(jd[1], d2 * omega[1], rel_tol=1e-4, abs_tol=1e-12)


def test_included_angles_at_reference_pose():
    beta = included_angles((0.0, 0.0), P)
    assert math.isclose(beta[0], 0.5 * math.pi - P.sigma1)
    assert math.isclose(beta[1], math.pi - P.sigma2)


def test_degenerate_triangle_raises():
    # equal lever and anchor lets the triangle collapse once the crank
    # tip reaches the anchor; each form gets a pose where its own
    # arithmetic cancels exactly
    p = LimbParams(dim4=0.2, dim2=0.2, dim1=0.001)
    with pytest.raises(DegenerateGeometryError):
        sea_length((p.alpha1, 0.0), p)
    q = LimbParams(dim4=P.dim3)
    theta1 = q.alpha1 + q.sigma1 - 0.5 * math.pi  # drives beta1 to zero
    with pytest.raises(DegenerateGeometryError):
        sea_length_included_angle((theta1, 0.0), q)


def test_default_geometry_never_degenerate():
    for k in range(64):
        theta = (-math.pi + k * math.pi / 16.0, math.pi - k * math.pi / 16.0)
        ls = sea_length(theta, P)
        assert ls[0] > 0.0 and ls[1] > 0.0
