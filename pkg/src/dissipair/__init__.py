"""Two identical particles under dissipation.

Closed-form Gaussian dynamics in the Caldirola-Kanai (CK) and
Caldeira-Leggett (CL) frameworks, the exchange-statistics observables
built on them, and independent numerical oracles.
"""
from .ck import CrossMoments, Environment, GaussianPacket, GaussianState
from .errors import (
    AliasError,
    BranchError,
    DegenerateDetector,
    DissipairError,
    DomainError,
    NodeAtDetector,
    NoConvergence,
    PauliExclusion,
    UnsupportedGeometry,
)
from .pairs import BE, FD, MB, CKKernel, CLKernel, Double, ExchangeStatistics, Point, Single, ck_kernel, cl_kernel
from .slits import SlitConfig, SlitSuperposition, slit_kernel

__version__ = "0.1.0"

__all__ = [
    "BE",
    "FD",
    "MB",
    "AliasError",
    "BranchError",
    "CKKernel",
    "CLKernel",
    "CrossMoments",
    "DegenerateDetector",
    "DissipairError",
    "DomainError",
    "Double",
    "Environment",
    "ExchangeStatistics",
    "GaussianPacket",
    "GaussianState",
    "NoConvergence",
    "NodeAtDetector",
    "PauliExclusion",
    "Point",
    "SlitConfig",
    "SlitSuperposition",
    "Single",
    "UnsupportedGeometry",
    "ck_kernel",
    "cl_kernel",
    "slit_kernel",
]
