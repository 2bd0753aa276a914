"""SIC-POVM probability representation of finite-dimensional quantum theory."""

from . import definetti, io, qbrep, qcore, scenarios, sic
from .estimators import MixtureTomography, SicFiducialSearch, SicProbabilityTransformer
from .exceptions import (
    ConditioningError,
    DomainError,
    IdentityViolation,
    InvalidInputError,
    InvalidityError,
    ParameterError,
    QbsicError,
    SchemaError,
    ShapeError,
    SizeError,
)
from .sic import Fiducial, SicSet, orbit, search_fiducial, verify_sic

__version__ = "0.1.0"
