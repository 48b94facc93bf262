import math

import pytest

from etsmc.errors import ConfigError, InvalidStateError
from etsmc.trajectory import (
    GaitSpec,
    TabulatedTrajectory,
    assumption1_check,
    desired,
)


def test_validation():
    GaitSpec().validate()
    with pytest.raises(ConfigError):
        GaitSpec(period=0.0).validate()
    with pytest.raises(ConfigError):
        GaitSpec(hip_amplitude=-0.1).validate()
    with pytest.raises(ConfigError):
        GaitSpec(knee_amplitude=-0.1).validate()


def test_start_is_a_velocity_extreme():
    spec = GaitSpec()
    (x1, x2), (v1, v2), (a1, a2) = spec.desired(0.0)
    # cosine phase: both joints at peak excursion, momentarily at rest
    assert x1 == pytest.approx(spec.hip_offset + spec.hip_amplitude)
    assert x2 == pytest.approx(spec.knee_offset + spec.knee_amplitude)
    assert abs(v1) < 1e-15 and abs(v2) < 1e-15
    assert a1 < 0.0 and a2 < 0.0


def test_periodicity_bit_exact_on_dyadic_times():
    spec = GaitSpec()
    # dyadic instants add exactly, so wrapped phases match bit for bit
    for t in (0.0, 0.125, 0.25, 0.375, 0.5, 0.8125):
        assert spec.desired(t) == spec.desired(t + spec.period)
        assert spec.desired(t) == spec.desired(t + 4.0 * spec.period)


def test_derivatives_by_finite_difference():
    spec = GaitSpec(period=1.3, hip_amplitude=0.2, knee_amplitude=0.15,
                    hip_offset=-0.1, knee_offset=0.3, hip_phase=0.4,
                    phase_shift=1.1)
    h = 1e-6
    for t in (0.05, 0.33, 0.71, 1.02):
        xm, vm, _ = spec.desired(t - h)
        x0, v0, a0 = spec.desired(t)
        xp, vp, _ = spec.desired(t + h)
        for i in range(2):
            fd_v = (xp[i] - xm[i]) / (2.0 * h)
            fd_a = (vp[i] - vm[i]) / (2.0 * h)
            assert math.isclose(v0[i], fd_v, rel_tol=1e-7, abs_tol=1e-8)
            assert math.isclose(a0[i], fd_a, rel_tol=1e-7, abs_tol=1e-8)


def test_offsets_and_amplitudes_bound_the_reference():
    spec = GaitSpec()
    for k in range(200):
        t = 10.0 * k / 200.0
        (x1, x2), _, _ = spec.desired(t)
        assert abs(x1 - spec.hip_offset) <= spec.hip_amplitude + 1e-15
        assert abs(x2 - spec.knee_offset) <= spec.knee_amplitude + 1e-15


def test_assumption_check_passes_for_sinusoid():
    assert assumption1_check(GaitSpec())
    assert assumption1_check(GaitSpec(period=0.7, hip_phase=0.3,
                                      phase_shift=2.0))


def _write_table(path, rows):
    lines = ["t_s,theta_d1_rad,theta_d2_rad"]
    lines.extend(f"{t!r},{a!r},{b!r}" for t, a, b in rows)
    path.write_text("\n".join(lines) + "\n")


def test_tabulated_roundtrip_accuracy(tmp_path):
    # tabulate a sinusoid finely; the spline must reproduce it and its
    # derivatives away from the table ends
    spec = GaitSpec()
    rows = []
    n = 501
    for k in range(n):
        t = k / (n - 1)
        (x1, x2), _, _ = spec.desired(t)
        rows.append((t, x1, x2))
    path = tmp_path / "gait.csv"
    _write_table(path, rows)
    tab = TabulatedTrajectory.from_csv(path)
    assert tab.t_min == 0.0 and tab.t_max == 1.0
    for t in (0.1, 0.25, 0.4, 0.62, 0.9):
        x_ref, v_ref, a_ref = spec.desired(t)
        x, v, a = tab.desired(t)
        for i in range(2):
            assert math.isclose(x[i], x_ref[i], abs_tol=1e-9)
            assert math.isclose(v[i], v_ref[i], abs_tol=1e-6)
            assert math.isclose(a[i], a_ref[i], abs_tol=1e-3)


def test_tabulated_range_is_enforced(tmp_path):
    path = tmp_path / "gait.csv"
    _write_table(path, [(0.0, 0.0, 0.0), (0.1, 0.01, 0.0),
                        (0.2, 0.02, 0.01), (0.3, 0.01, 0.02)])
    tab = TabulatedTrajectory.from_csv(path)
    tab.desired(0.15)
    with pytest.raises(InvalidStateError):
        tab.desired(-0.01)
    with pytest.raises(InvalidStateError):
        tab.desired(0.31)


def test_tabulated_rejects_bad_tables(tmp_path):
    path = tmp_path / "bad.csv"

    path.write_text("")
    with pytest.raises(ConfigError):
        TabulatedTrajectory.from_csv(path)

    path.write_text("time,th1,th2\n0,0,0\n")
    with pytest.raises(ConfigError):
        TabulatedTrajectory.from_csv(path)

    _write_table(path, [(0.0, 0.0, 0.0), (0.1, 0.0, 0.0), (0.2, 0.0, 0.0)])
    with pytest.raises(ConfigError):
        TabulatedTrajectory.from_csv(path)  # too few samples

    _write_table(path, [(0.0, 0.0, 0.0), (0.2, 0.0, 0.0), (0.1, 0.0, 0.0),
                        (0.3, 0.0, 0.0)])
    with pytest.raises(ConfigError):
        TabulatedTrajectory.from_csv(path)  # times not increasing

    path.write_text("t_s,theta_d1_rad,theta_d2_rad\n0.0,0.0\n")
    with pytest.raises(ConfigError):
        TabulatedTrajectory.from_csv(path)  # short row

    with pytest.raises(InvalidStateError):
        TabulatedTrajectory([0.0, 0.1], [0.0], [0.0, 0.0])


def test_assumption_check_warns_for_tabulated(tmp_path):
    path = tmp_path / "gait.csv"
    _write_table(path, [(0.0, 0.0, 0.0), (0.1, 0.01, 0.0),
                        (0.2, 0.02, 0.01), (0.3, 0.01, 0.02)])
    tab = TabulatedTrajectory.from_csv(path)
    with pytest.warns(RuntimeWarning):
        assert assumption1_check(tab)


def test_module_level_desired_matches_method():
    spec = GaitSpec()
    assert desired(0.42, spec) == spec.desired(0.42)
