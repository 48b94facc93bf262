"""Desired joint trajectories.

The default reference is a smooth sinusoidal gait surrogate: the hip
swings symmetrically about zero while the knee oscillates about a flexed
offset.  Both joints start at an excursion extreme (cosine phase), so a
run launches from a velocity reversal where the limb is momentarily at
rest.  Real recorded gait can be substituted through
:class:`TabulatedTrajectory`.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, InvalidStateError
from .geometry import Vec2

TrajSample = tuple[Vec2, Vec2, Vec2]  # (x_d, d(x_d)/dt, dd(x_d)/dt^2)


@dataclass(frozen=True)
class GaitSpec:
    """Sinusoidal gait surrogate parameters."""

    period: float = 1.0         # s per stride cycle
    hip_amplitude: float = 0.010  # rad
    hip_offset: float = 0.0       # rad
    hip_phase: float = 0.5 * math.pi   # rad
    knee_amplitude: float = 0.013  # rad
    knee_offset: float = 0.05      # rad
    phase_shift: float = 0.5 * math.pi  # rad, knee phase

    def validate(self) -> None:
        if not self.period > 0.0:
            raise ConfigError("trajectory.period must be strictly positive")
        for name in ("hip_amplitude", "knee_amplitude"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"trajectory.{name} must be non-negative")

    def desired(self, t: float) -> TrajSample:
        return desired(t, self)


def desired(t: float, spec: GaitSpec) -> TrajSample:
    """Desired angles and their first two analytic derivatives at ``t``.

    The phase is reduced modulo one period before evaluation so that
    samples exactly one period apart coincide bit for bit.
    """
    tau = math.fmod(t, spec.period)
    w = 2.0 * math.pi / spec.period
    ph1 = w * tau + spec.hip_phase
    ph2 = w * tau + spec.phase_shift
    x1 = spec.hip_offset + spec.hip_amplitude * math.sin(ph1)
    x2 = spec.knee_offset + spec.knee_amplitude * math.sin(ph2)
    v1 = spec.hip_amplitude * w * math.cos(ph1)
    v2 = spec.knee_amplitude * w * math.cos(ph2)
    a1 = -spec.hip_amplitude * w * w * math.sin(ph1)
    a2 = -spec.knee_amplitude * w * w * math.sin(ph2)
    return ((x1, x2), (v1, v2), (a1, a2))


class TabulatedTrajectory:
    """Cubic-spline trajectory built from a (t, theta_d1, theta_d2) table.

    The table is read from a CSV file with header
    ``t_s,theta_d1_rad,theta_d2_rad`` and strictly increasing times.
    Derivatives come from the spline.
    """

    def __init__(self, times: list[float], theta1: list[float],
                 theta2: list[float]) -> None:
        if not (len(times) == len(theta1) == len(theta2)):
            raise InvalidStateError("trajectory table columns differ in length")
        if len(times) < 4:
            raise ConfigError("trajectory table needs at least 4 samples")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("trajectory table times must strictly increase")
        from scipy.interpolate import CubicSpline

        self.t_min = times[0]
        self.t_max = times[-1]
        self._s1 = CubicSpline(times, theta1)
        self._s2 = CubicSpline(times, theta2)
        self._d1 = self._s1.derivative()
        self._d2 = self._s2.derivative()
        self._dd1 = self._d1.derivative()
        self._dd2 = self._d2.derivative()

    @classmethod
    def from_csv(cls, path: str | Path) -> "TabulatedTrajectory":
        header = ["t_s", "theta_d1_rad", "theta_d2_rad"]
        times: list[float] = []
        th1: list[float] = []
        th2: list[float] = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                first = next(reader)
            except StopIteration:
                raise ConfigError(f"empty trajectory table: {path}") from None
            if first != header:
                raise ConfigError(
                    f"trajectory table header must be {','.join(header)}"
                )
            for row in reader:
                if len(row) != 3:
                    raise ConfigError(f"malformed trajectory row: {row!r}")
                times.append(float(row[0]))
                th1.append(float(row[1]))
                th2.append(float(row[2]))
        return cls(times, th1, th2)

    def desired(self, t: float) -> TrajSample:
        if t < self.t_min or t > self.t_max:
            raise InvalidStateError(
                f"t={t!r} outside tabulated range [{self.t_min}, {self.t_max}]"
            )
        x = (float(self._s1(t)), float(self._s2(t)))
        v = (float(self._d1(t)), float(self._d2(t)))
        a = (float(self._dd1(t)), float(self._dd2(t)))
        return (x, v, a)


def assumption1_check(traj: GaitSpec | TabulatedTrajectory,
                      n_samples: int = 256) -> bool:
    """Verify the reference admits an autonomous oscillator realization.

    For the sinusoidal surrogate this checks dd(x_d) = -w^2 (x_d - offset)
    on a grid, which certifies that d(x_d)/dt is a function of the
    oscillator state alone.  Tabulated data cannot be certified this way,
    so the check is skipped with a warning.
    """
    if isinstance(traj, TabulatedTrajectory):
        warnings.warn(
            "assumption check skipped for tabulated trajectory",
            RuntimeWarning,
            stacklevel=2,
        )
        return True
    w2 = (2.0 * math.pi / traj.period) ** 2
    scale = max(traj.hip_amplitude, traj.knee_amplitude, 1e-12) * w2
    for k in range(n_samples):
        t = traj.period * k / n_samples
        (x1, x2), _, (a1, a2) = desired(t, traj)
        r1 = a1 + w2 * (x1 - traj.hip_offset)
        r2 = a2 + w2 * (x2 - traj.knee_offset)
        if abs(r1) > 1e-9 * scale or abs(r2) > 1e-9 * scale:
            return False
    return True
