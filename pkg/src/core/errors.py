"""Exception hierarchy shared by the core modules and the CLI."""


class SkewForgeError(Exception):
    """Base class for every error raised by SkewForge."""


class DomainError(SkewForgeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionError(SkewForgeError, ValueError):
    """Shapes of states, observables or bases do not fit together."""

    def __init__(self, message, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ContractViolationError(SkewForgeError, ValueError):
    """Input breaks a structural contract (Hermiticity, orthonormality)."""


class StateInvariantError(ContractViolationError):
    """A density matrix is not a state beyond the stated tolerances."""


class KernelSupportError(SkewForgeError, ValueError):
    """Operand of the monotone metric lives on the kernel of m^f(L, R)."""


class UnsupportedError(SkewForgeError):
    """A closed form was requested outside the range it is known for."""


class MatrixFormatError(SkewForgeError, ValueError):
    """A matrix JSON document could not be decoded."""


class ConfigError(SkewForgeError, ValueError):
    """A sweep configuration is malformed."""
