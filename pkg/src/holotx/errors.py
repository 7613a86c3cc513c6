"""Exception types shared across the toolkit."""


class HolotxError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(HolotxError):
    """Invalid or inconsistent run configuration (CLI exit code 2)."""


class DomainError(HolotxError):
    """Numeric or physical-domain violation (CLI exit code 3)."""
