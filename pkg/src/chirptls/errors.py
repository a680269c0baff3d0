"""Exception types shared across the package."""

__all__ = ["ChirpTlsError", "ConfigError", "IntegrationError"]


class ChirpTlsError(Exception):
    """Base class for package-specific failures."""


class ConfigError(ChirpTlsError, ValueError):
    """Invalid or contradictory run configuration.

    Also a ValueError so argument-conversion machinery treats it as a
    normal bad-value failure.
    """


class IntegrationError(ChirpTlsError):
    """Adaptive integrator failed to reach the requested accuracy."""
