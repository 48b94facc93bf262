"""Physical parameters of the two-link series-elastic limb.

Link 1 is the thigh segment (hip joint), link 2 the shank segment (knee
joint).  Each joint is driven by a ball-screw series elastic actuator
whose spring connects a frame anchor to a crank lever on the joint.  The
mounting triangle of SEA ``i`` is described by an anchor distance, a
crank lever, and two mounting angles; the remaining ``dim*`` entries are
the planar projections of the anchor offset and must stay consistent
with ``dim_anchor * cos(sigma)`` / ``dim_anchor * sin(sigma)`` for the
two closed forms of the spring length to coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

# Gravitational acceleration used when a config does not override it.
STANDARD_GRAVITY = 9.81  # m/s^2


@dataclass(frozen=True)
class LimbParams:
    """Rigid-body, spring, and mounting-geometry constants.

    Attributes
    ----------
    m1, m2:
        Segment masses [kg].
    I1, I2:
        Segment moments of inertia about their own centroids [kg m^2].
    L1:
        Thigh segment length [m].
    R1, R2:
        Centroid distances from the proximal joint [m].
    B1, B2:
        Viscous joint friction coefficients [N m s/rad].
    k1, k2:
        SEA spring rates [N/m].
    g:
        Gravitational acceleration [m/s^2].
    dim1..dim9:
        Mounting distances [m].  ``dim3``/``dim8`` are the frame anchor
        distances, ``dim4``/``dim9`` the crank levers of joints 1 and 2;
        ``dim1``/``dim2`` and ``dim6``/``dim7`` are the anchor offset
        projections; ``dim5`` is the shank link length (layout only).
    alpha1, alpha2, sigma1, sigma2:
        Mounting angles [rad].
    """

    m1: float = 1.07
    m2: float = 0.89
    I1: float = 0.028
    I2: float = 0.002
    L1: float = 0.30
    R1: float = 0.15
    R2: float = 0.15
    B1: float = 0.3
    B2: float = 0.3
    k1: float = 200.0
    k2: float = 200.0
    g: float = STANDARD_GRAVITY
    dim1: float = 0.2 * math.cos(0.2)
    dim2: float = 0.2 * math.sin(0.2)
    dim3: float = 0.2
    dim4: float = 0.002
    dim5: float = 0.30
    dim6: float = 0.2 * math.cos(1.4)
    dim7: float = 0.2 * math.sin(1.4)
    dim8: float = 0.2
    dim9: float = 0.002
    alpha1: float = 0.0
    alpha2: float = 0.0
    sigma1: float = 0.2
    sigma2: float = 1.4

    def validate(self) -> None:
        """Raise :class:`ConfigError` on out-of-range physical constants."""
        positive = (
            "m1", "m2", "I1", "I2", "L1", "R1", "R2", "k1", "k2", "g",
            "dim1", "dim2", "dim3", "dim4", "dim5", "dim6", "dim7", "dim8", "dim9",
        )
        for name in positive:
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"limb.{name} must be strictly positive")
        for name in ("B1", "B2"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"limb.{name} must be non-negative")
        for name in ("alpha1", "alpha2", "sigma1", "sigma2"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"limb.{name} must be finite")


def default_limb_params() -> LimbParams:
    """Limb constants used throughout the reference experiments."""
    return LimbParams()
