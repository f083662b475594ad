"""
Shield exception hierarchy.

The CLI maps these to exit codes: configuration problems exit 1, missing
upstream artifacts exit 2, broken internal invariants exit 3.
"""


class ShieldError(Exception):
    """Base class for all Shield errors."""

    exit_code = 3


class ConfigError(ShieldError, ValueError):
    """Invalid user input or run configuration."""

    exit_code = 1


class ManifestError(ConfigError):
    """Unreadable manifest row or referenced audio file."""


class ShapeError(ShieldError, ValueError):
    """A signal or tensor has the wrong length or dimension."""


class MissingDependencyError(ShieldError, FileNotFoundError):
    """A stage needs a checkpoint that has not been produced yet."""

    exit_code = 2


class UntrainedModelError(ShieldError, ValueError):
    """An evaluation was requested on a model that was never trained."""

    exit_code = 2


class InvariantViolation(ShieldError, AssertionError):
    """An internal invariant failed (pairing, grid completeness, loss identity)."""
