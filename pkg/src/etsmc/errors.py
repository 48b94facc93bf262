"""Exception types shared across the simulation stack."""

from __future__ import annotations


class EtsmcError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(EtsmcError):
    """Bad configuration input: unknown key, wrong type, or out-of-range value."""


class InvalidStateError(EtsmcError):
    """A state or record violates a structural contract (shape, monotonic time)."""


class DegenerateGeometryError(EtsmcError):
    """SEA mounting triangle has collapsed (spring length not strictly positive)."""


class SingularInertiaError(EtsmcError):
    """Mass matrix is singular or indefinite for the requested configuration."""


class NearSingularActuationError(EtsmcError):
    """Actuation map cannot be inverted because a moment arm is (near) zero."""


class DivergenceError(EtsmcError):
    """Simulated state left the trust region (non-finite or norm above bound)."""


class TraceFormatError(EtsmcError):
    """A trace CSV does not follow the published column contract."""
