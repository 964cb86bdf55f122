from typing import Sequence

__all__: Sequence[str] = (
    "HeraldicException",
    "DimensionError",
    "NotUnitaryError",
    "NotHermitianError",
    "SectorMismatchError",
    "InvalidStateError",
    "InvalidCircuitError",
    "ClaimError",
    "ConfigError",
    "OptimizationError",
    "UnknownSchemeError",
)


class HeraldicException(Exception):
    """Base Exception for all exceptions heraldic throws"""


class DimensionError(HeraldicException):
    """A matrix, state or element does not fit the number of modes it is used with"""


class NotUnitaryError(HeraldicException):
    """A matrix deviates from unitarity by more than the allowed tolerance"""


class NotHermitianError(HeraldicException):
    """A chart coordinate is not a Hermitian matrix"""


class SectorMismatchError(HeraldicException):
    """Two states live in different mode or photon-number sectors"""


class InvalidStateError(HeraldicException):
    """A Fock state or superposition is malformed"""


class InvalidCircuitError(HeraldicException):
    """A circuit element or phase layer has parameters outside of their canonical ranges"""


class ClaimError(HeraldicException):
    """A claim set is malformed. Raised before anything is simulated."""


class ConfigError(HeraldicException):
    """A search or refinement configuration is malformed or can not be satisfied"""


class OptimizationError(HeraldicException):
    """The objective or its gradient is not finite at the starting point"""


class UnknownSchemeError(HeraldicException):
    """No built-in scheme is registered under the requested name"""
