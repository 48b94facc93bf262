"""End-to-end acceptance gates for the default laboratory setup.

Every test here checks an externally meaningful band (trigger budgets,
tracking parity, interval spacing, closed-form constants, per-sample
trace invariants, reduced-model descent, numerical kernel quality, and
byte-level reproducibility) at the shipped default configuration.
Bands are pinned; loosening one is a behavior change, not a test fix.
"""

import math
import time

import numpy as np

from etsmc.actuator import SeaParams, reference_lengths_at
from etsmc.dynamics import fx_gx, joint_accel, mass_matrix
from etsmc.engine import (
    Disturbance,
    DisturbanceSpec,
    SimConfig,
    initial_state,
    make_rhs,
    rk4_step,
    run,
)
from etsmc.geometry import sea_jacobian, sea_length
from etsmc.params import LimbParams
from etsmc.reaching import ReachingSetup, reaching_sweep
from etsmc.report import trace_metrics, velocity_reversals
from etsmc.traceio import trace_text
from etsmc.trajectory import GaitSpec
from etsmc.trigger import TriggerParams, threshold

P = LimbParams()
SIM = SimConfig()


def test_trigger_budget_and_runtime(default_compare):
    """Time-triggered firing at every sampling instant against an event
    budget a factor of at least 2.5 smaller, inside the runtime cap."""
    outcome, wall = default_compare
    tt = outcome.time_result.stats.trigger_count
    et = outcome.event_result.stats.trigger_count
    print(f"tt={tt} et={et} reduction={tt / et:.3f} wall={wall:.2f}s")
    # one trigger per sampling instant over [0, duration)
    assert tt == SIM.n_samples() == 1000
    assert 200 <= et <= 450
    assert tt / et >= 2.5
    assert wall < 5.0


def test_peak_error_parity_and_timing(default_compare):
    """Event triggering costs at most 15% peak tracking error, and both
    peaks happen near a reversal of the desired motion."""
    outcome, _ = default_compare
    tt = trace_metrics(outcome.time_result.records)
    et = trace_metrics(outcome.event_result.records)
    print(f"tt_max={tt['max_err_rad']:.3e} et_max={et['max_err_rad']:.3e} "
          f"ratio={et['max_err_rad'] / tt['max_err_rad']:.3f}")
    assert et["max_err_rad"] <= 1.15 * tt["max_err_rad"]
    revs = velocity_reversals(GaitSpec(), SIM.duration)
    all_revs = revs[0] + revs[1]
    assert all_revs, "reference motion must reverse at least once"
    for peak_t in (tt["peak_err_time_s"], et["peak_err_time_s"]):
        assert min(abs(peak_t - r) for r in all_revs) <= 0.5
    # both modes tracked the same reference samples
    for a, b in zip(outcome.time_result.records,
                    outcome.event_result.records):
        assert a.theta_d == b.theta_d


def test_inter_event_spacing_bands(default_compare):
    """Event spacing at defaults: no Zeno pile-up, no dead controller."""
    outcome, _ = default_compare
    stats = outcome.event_result.stats
    lo = stats.min_inter_event()
    hi = stats.max_inter_event()
    mean = stats.mean_inter_event()
    print(f"min={lo:.4f} mean={mean:.4f} max={hi:.4f}")
    assert lo >= SIM.sampling_period - 1e-12
    assert 0.1 <= hi <= 0.5
    assert 0.02 <= mean <= 0.1


def test_threshold_closed_form_constant():
    value = threshold(TriggerParams(eta=0.3, lipschitz=0.85, c=30.0))
    assert abs(value - 0.011758) <= 1e-6
    assert abs(value - 0.011758175376225345) < 1e-15


def test_trace_event_invariants(default_compare):
    """Per-sample contract of every trace: fresh snapshots measure zero
    drift, held snapshots stay under the threshold and inside the error
    ball, and the trigger column is the trigger count."""
    outcome, _ = default_compare
    for result in (outcome.time_result, outcome.event_result):
        thr = result.threshold_value
        column = 0
        for rec in result.records:
            if rec.triggered:
                column += 1
                assert rec.e_norm == 0.0
            else:
                assert rec.e_norm < thr
                assert rec.x_tilde <= 0.2
        assert column == result.stats.trigger_count


def test_reduced_model_lyapunov_descent():
    """With the actuator bypassed and the command refreshed every step,
    the constructed gain rho = g0 d0 + eta forces V_x to decay off the
    surface for 20 random seeds, within a 10 s budget."""
    setup = ReachingSetup()
    t0 = time.perf_counter()
    results = reaching_sweep(range(20), setup=setup)
    wall = time.perf_counter() - t0
    worst_final = max(r.final_s_norm for r in results)
    print(f"g0={results[0].g0:.2f} rho={results[0].rho:.3f} "
          f"wall={wall:.2f}s worst_final_s={worst_final:.2e}")
    assert wall < 10.0
    assert len(results) == 20
    for res in results:
        assert res.rho == res.g0 * setup.d0 + 0.3  # constructed, literally
        assert res.checked > 0
        assert res.violations == 0
        assert res.ok
    assert setup.surface_band == 1e-3


def test_rk4_measured_convergence_order():
    """Fourth order must show up on the coupled plant, not just on toy
    problems: halving the step cuts the error by about 16."""
    traj = GaitSpec()
    start = initial_state(traj, P)
    sea = SeaParams(damping=48.0,
                    reference_lengths=reference_lengths_at(start.theta, P))
    dist = Disturbance(DisturbanceSpec(), seed=2025)
    rhs = make_rhs(P, sea, dist)
    u = (0.2, -0.1)
    t_end = 0.2

    def integrate(h):
        y = start.as_tuple()
        n = int(round(t_end / h))
        for k in range(n):
            y = rk4_step(y, k * h, h, u, rhs)
        return y

    ref = integrate(2.5e-5)
    errs = []
    for h in (2e-3, 1e-3, 5e-4):
        y = integrate(h)
        errs.append(max(abs(a - b) for a, b in zip(y, ref)))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    print(f"errors={errs} orders={orders}")
    for order in orders:
        assert order >= 3.8


def test_spring_rate_map_against_finite_difference():
    rng = np.random.Generator(np.random.PCG64(1234))
    h = 1e-5
    worst = 0.0
    for _ in range(1000):
        th1 = float(rng.uniform(-1.2, 1.2))
        th2 = float(rng.uniform(-1.2, 1.2))
        j = sea_jacobian((th1, th2), P)
        fd1 = (sea_length((th1 + h, th2), P)[0]
               - sea_length((th1 - h, th2), P)[0]) / (2.0 * h)
        fd2 = (sea_length((th1, th2 + h), P)[1]
               - sea_length((th1, th2 - h), P)[1]) / (2.0 * h)
        worst = max(worst, abs(j[0] - fd1) / abs(fd1),
                    abs(j[1] - fd2) / abs(fd2))
    print(f"worst_rel={worst:.3e}")
    assert worst < 1e-6


def test_acceleration_paths_agree():
    """The direct torque-balance path and the drift/input split must be
    the same dynamics to near machine precision."""
    rng = np.random.Generator(np.random.PCG64(4321))
    worst = 0.0
    for _ in range(1000):
        theta = (float(rng.uniform(-1.2, 1.2)), float(rng.uniform(-1.2, 1.2)))
        omega = (float(rng.uniform(-4.0, 4.0)), float(rng.uniform(-4.0, 4.0)))
        delta = (float(rng.uniform(-0.1, 0.1)), float(rng.uniform(-0.1, 0.1)))
        d = (float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5)))
        direct = joint_accel(theta, omega, delta, d, P)
        f, g = fx_gx(theta, omega, P)
        md = mass_matrix(theta[1], P).solve(d)
        split = (
            f[0] + g[0][0] * delta[0] + g[0][1] * delta[1] + md[0],
            f[1] + g[1][0] * delta[0] + g[1][1] * delta[1] + md[1],
        )
        scale = max(abs(direct[0]), abs(direct[1]), 1e-6)
        worst = max(worst, abs(direct[0] - split[0]) / scale,
                    abs(direct[1] - split[1]) / scale)
    print(f"worst_rel={worst:.3e}")
    assert worst < 1e-10


def test_traces_are_byte_reproducible(default_compare, tmp_path):
    """Identical configuration and seed must serialize to identical
    bytes, trigger flags and all."""
    outcome, _ = default_compare
    fresh_et = run("event")
    fresh_tt = run("time")
    for fixture_result, fresh in ((outcome.event_result, fresh_et),
                                  (outcome.time_result, fresh_tt)):
        a = trace_text(fixture_result.records)
        b = trace_text(fresh.records)
        assert a == b
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        p1.write_bytes(a.encode("ascii"))
        p2.write_bytes(b.encode("ascii"))
        assert p1.read_bytes() == p2.read_bytes()
