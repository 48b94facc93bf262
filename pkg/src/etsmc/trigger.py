"""Event-trigger rule, threshold arithmetic, and trigger bookkeeping.

The trigger watches the drift of the extended error matrix since the
last trigger instant.  A new trigger fires at a sampling instant when

    || eps(t_i) - eps(t) ||_F  >=  eta / (L sqrt(1 + c^2))

or when the tracking error has left the ball of radius r where the
Lipschitz estimate L holds.  The first sampling instant always
triggers so the controller starts from a fresh snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .control import Epsilon
from .errors import ConfigError, InvalidStateError


@dataclass(frozen=True)
class TriggerParams:
    """Trigger threshold inputs and self-triggering diagnostics.

    eta is the stability margin retained by the reaching law,
    lipschitz bounds the error-dynamics growth inside the ball of
    radius error_radius, and c must match the sliding-surface gain.
    lambda_est, h_bound, and d0_bound only feed the minimum
    inter-event bound reported for Zeno screening; d0_bound is the
    disturbance torque magnitude the screen assumes, not the
    disturbance actually injected in a run.
    """

    eta: float = 0.3
    lipschitz: float = 0.85
    c: float = 30.0
    error_radius: float = 0.2
    lambda_est: float = 1.0
    h_bound: float = 1.0
    d0_bound: float = 0.5
    g0: float = 0.0  # optional pre-estimated actuation gain bound, 0 = unset

    def validate(self) -> None:
        for name in ("eta", "lipschitz", "c", "error_radius",
                     "lambda_est", "h_bound"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"trigger.{name} must be strictly positive")
        if self.d0_bound < 0.0:
            raise ConfigError("trigger.d0_bound must be non-negative")
        if self.g0 < 0.0:
            raise ConfigError("trigger.g0 must be non-negative")


def threshold(params: TriggerParams) -> float:
    """Drift norm at which a trigger fires: eta / (L sqrt(1 + c^2))."""
    return params.eta / (params.lipschitz * math.sqrt(1.0 + params.c ** 2))


def event_error(eps_held: Epsilon, eps_now: Epsilon) -> float:
    """Frobenius norm of the drift between two extended error matrices."""
    if len(eps_held) != len(eps_now):
        raise InvalidStateError("extended error matrices differ in shape")
    acc = 0.0
    for a, b in zip(eps_held, eps_now):
        diff = a - b
        acc += diff * diff
    return math.sqrt(acc)


def should_trigger(e_norm: float, x_tilde_norm: float,
                   params: TriggerParams) -> bool:
    """Trigger when the drift reaches the threshold or the error ball leaks."""
    return e_norm >= threshold(params) or x_tilde_norm > params.error_radius


def zeno_bound(params: TriggerParams) -> float:
    """Analytic lower bound on the inter-event time.

    (1/lambda) ln(r + h + d0 + threshold).  A value <= 0 means the
    estimate is vacuous for these parameters (log argument <= 1) and
    the run report flags it instead of trusting it.
    """
    arg = (params.error_radius + params.h_bound + params.d0_bound
           + threshold(params))
    if arg <= 0.0:
        raise InvalidStateError("zeno bound argument must be positive")
    return math.log(arg) / params.lambda_est


@dataclass
class TriggerStats:
    """Trigger times and inter-event intervals accumulated over a run.

    Intervals are snapped to the sampling grid so downstream
    comparisons against multiples of the sampling period are exact.
    """

    sampling_period: float
    sample_count: int = 0
    trigger_count: int = 0
    trigger_times: list[float] = field(default_factory=list)
    inter_event: list[float] = field(default_factory=list)
    _last_time: float = math.nan

    def record_step(self, t: float, triggered: bool) -> None:
        if self.sample_count and not t > self._last_time:
            raise InvalidStateError("samples must advance in time")
        self._last_time = t
        self.sample_count += 1
        if not triggered:
            return
        if self.trigger_times:
            raw = t - self.trigger_times[-1]
            # round to the grid; raw diffs carry float dust
            snapped = round(raw / self.sampling_period) * self.sampling_period
            self.inter_event.append(snapped)
        self.trigger_count += 1
        self.trigger_times.append(t)

    def min_inter_event(self) -> float:
        return min(self.inter_event) if self.inter_event else math.nan

    def max_inter_event(self) -> float:
        return max(self.inter_event) if self.inter_event else math.nan

    def mean_inter_event(self) -> float:
        if not self.inter_event:
            return math.nan
        return sum(self.inter_event) / len(self.inter_event)
