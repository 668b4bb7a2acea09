"""Exception types shared across the package."""


class WalshPrimeError(Exception):
    """Base class for package-specific failures."""


class ConfigError(WalshPrimeError):
    """Invalid user-supplied configuration (bad flag, bad zoo spec, ...)."""


class CapacityError(WalshPrimeError):
    """Requested cube dimension exceeds the configured memory cap."""


class DegenerateInputError(WalshPrimeError):
    """An operation received an input it cannot meaningfully process,
    e.g. a correlation report for a function with mean zero."""


class CacheFormatError(WalshPrimeError):
    """A cache file failed structural or checksum validation."""
