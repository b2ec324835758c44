"""Entropy-entropy production analysis for the ellipsoidal BGK model."""

from .errors import (
    BracketFailure,
    DegenerateTriple,
    DomainError,
    InfeasibleSP,
    NonPositiveDensity,
    PositivityLoss,
    SingularTensor,
)
from .scalar_analysis import CnuResult, Maximizer, PrandtlParam, compute_cnu

__version__ = "0.1.0"

__all__ = [
    "BracketFailure",
    "CnuResult",
    "DegenerateTriple",
    "DomainError",
    "InfeasibleSP",
    "Maximizer",
    "NonPositiveDensity",
    "PositivityLoss",
    "PrandtlParam",
    "SingularTensor",
    "compute_cnu",
]
