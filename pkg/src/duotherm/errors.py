"""Exception types shared across the package."""


class DuothermError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(DuothermError, ValueError):
    """Operands or subsystem shapes do not compose."""


class ValidationError(DuothermError, ValueError):
    """An object violates one of its declared invariants."""


class ConfigurationError(DuothermError, ValueError):
    """A config dataclass or CLI request is inconsistent."""


class ChannelConstructionError(DuothermError, ValueError):
    """A Kraus set failed its completeness check at construction time."""


class DarkPortError(DuothermError, RuntimeError):
    """A post-selection branch has (near-)zero probability."""
