import math

import pytest
from hypothesis import given, strategies as st

from etsmc.control import (
    GainSet,
    _switch,
    backstep_stage1,
    backstep_stage2,
    error_state,
    extended_error,
    lyapunov_values,
    sliding_surface,
    smc_law,
    x_tilde_norm,
)
from etsmc.dynamics import fx_gx
from etsmc.errors import ConfigError, NearSingularActuationError
from etsmc.params import LimbParams

P = LimbParams()

angles = st.floats(min_value=-1.2, max_value=1.2, allow_nan=False)
rates = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def _err(theta, omega, x_d=(0.0, 0.0), x_d_dot=(0.0, 0.0),
         x_d_ddot=(0.0, 0.0)):
    return error_state(theta, omega, (x_d, x_d_dot, x_d_ddot))


def test_gain_validation():
    GainSet().validate()
    for bad in (GainSet(c=0.0), GainSet(rho=-1.0), GainSet(k_p1=0.0),
                GainSet(k_p2=-2.0), GainSet(boundary_layer=-0.1)):
        with pytest.raises(ConfigError):
            bad.validate()


def test_error_state_and_extended_error_layout():
    err = _err((1.0, 2.0), (3.0, 4.0), x_d=(0.5, 0.5), x_d_dot=(1.0, 1.0))
    assert err.x_tilde1 == (0.5, 1.5)
    assert err.x_tilde2 == (2.0, 3.0)
    eps = extended_error(err)
    assert eps == (0.5, 1.5, 2.0, 3.0, 0.5, 0.5, 1.0, 1.0)
    assert x_tilde_norm(err) == math.sqrt(0.25 + 2.25 + 4.0 + 9.0)


def test_sliding_surface_hand_value():
    err = _err((1.0, -2.0), (3.0, 4.0))
    assert sliding_surface(err, 2.0) == (5.0, 0.0)


def test_switch_shapes():
    # outside the layer: saturated at +-rho; inside: linear; at zero: zero
    assert _switch(1.0, 2.0, 0.5) == 2.0
    assert _switch(-1.0, 2.0, 0.5) == -2.0
    assert _switch(0.25, 2.0, 0.5) == 2.0 * 0.25 / 0.5
    assert _switch(0.0, 2.0, 0.5) == 0.0
    # pure sign law when the layer is off
    assert _switch(1e-300, 2.0, 0.0) == 2.0
    assert _switch(-1e-300, 2.0, 0.0) == -2.0
    assert _switch(0.0, 2.0, 0.0) == 0.0
    # the saturated branch takes over exactly at the layer edge
    assert _switch(0.5, 2.0, 0.5) == 2.0


@given(angles, angles, rates, rates,
       st.floats(min_value=-0.15, max_value=0.15),
       st.floats(min_value=-0.15, max_value=0.15))
def test_smc_law_solves_reaching_equation(th1, th2, w1, w2, e1, e2):
    gains = GainSet()
    theta = (th1, th2)
    omega = (w1, w2)
    x_d = (th1 - e1, th2 - e2)
    err = _err(theta, omega, x_d=x_d, x_d_dot=(0.0, 0.0),
               x_d_ddot=(0.1, -0.2))
    f, g = fx_gx(theta, omega, P)
    v = smc_law(err, f, g, gains)
    s = sliding_surface(err, gains.c)
    for i in range(2):
        lhs = g[i][0] * v[0] + g[i][1] * v[1]
        rhs = (-f[i] + err.x_d_ddot[i] - gains.c * err.x_tilde2[i]
               - _switch(s[i], gains.rho, gains.boundary_layer))
        scale = max(abs(lhs), abs(rhs), 1.0)
        assert abs(lhs - rhs) <= 1e-9 * scale


def test_smc_law_rejects_singular_input_matrix():
    err = _err((0.0, 0.0), (0.0, 0.0))
    g = ((1.0, 2.0), (2.0, 4.0))  # rank 1
    with pytest.raises(NearSingularActuationError):
        smc_law(err, (0.0, 0.0), g, GainSet())


def test_backstep_hand_values():
    v1 = backstep_stage1(v_x_held=(1.0, 2.0), z1=(0.5, 1.0), s=(1.0, -1.0),
                         g_x=((2.0, 3.0), (4.0, 5.0)), k_p1=10.0)
    # g^T s = (2*1 + 4*(-1), 3*1 + 5*(-1)) = (-2, -2)
    assert v1 == (10.0 * 0.5 + 2.0, 10.0 * 1.0 + 2.0)
    u = backstep_stage2(v_x_held=(1.0, 2.0), z1=(0.5, 1.0), z2=(0.2, 0.1),
                        v1=(7.0, 12.0), v1_dot=(1.0, 1.0), f2=(0.3, 0.4),
                        k_p2=20.0)
    assert math.isclose(u[0], 0.3 - 20.0 * 6.8 - 1.0 - 0.5)
    assert math.isclose(u[1], 0.4 - 20.0 * 11.9 - 1.0 - 1.0)


def test_lyapunov_values_nest():
    v_x, v_1, v_2 = lyapunov_values((3.0, 4.0), (1.0, 1.0), (2.0, 0.0))
    assert v_x == 12.5
    assert v_1 == 13.5
    assert v_2 == 15.5
    assert v_x <= v_1 <= v_2


@given(rates, rates, rates, rates, rates, rates)
def test_lyapunov_values_monotone_nesting(a, b, c, d, e, f):
    v_x, v_1, v_2 = lyapunov_values((a, b), (c, d), (e, f))
    assert v_x >= 0.0
    assert v_1 >= v_x
    assert v_2 >= v_1
