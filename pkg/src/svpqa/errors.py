"""Exception types shared across the simulator."""


class SvpqaError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SvpqaError, ValueError):
    """An input violates a documented precondition or invariant."""


class DegenerateBasisError(ValidationError):
    """Lattice basis vectors are (numerically) linearly dependent."""


class DimensionMismatchError(ValidationError):
    """Operands live on registers or lattices of different dimension."""


class IntegrationError(SvpqaError, RuntimeError):
    """Schedule integration lost unitarity; rerun with more time slices."""


class ConvergenceError(SvpqaError, RuntimeError):
    """Step-doubling refinement did not stabilize the failure probability."""


class ConfigError(ValidationError):
    """Experiment configuration is incomplete or inconsistent."""
