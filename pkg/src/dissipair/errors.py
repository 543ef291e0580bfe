"""Exception hierarchy.

Every numerical failure raised by the library derives from
:class:`DissipairError`, so callers (and the CLI) can catch one type.
"""


class DissipairError(Exception):
    """Base class for all library errors."""


class DomainError(DissipairError, ValueError):
    """Argument outside the validated domain, or a non-finite result."""


class UnsupportedGeometry(DissipairError, ValueError):
    """Closed form requested for a configuration it does not cover."""


class PauliExclusion(DissipairError):
    """Antisymmetrized state of (nearly) identical one-particle states vanishes."""


class DegenerateDetector(DissipairError):
    """Detector captures (numerically) zero one-particle probability."""


class NodeAtDetector(DissipairError):
    """A one-particle wavefunction underflows at a point detector."""


class BranchError(DissipairError):
    """Gaussian lost integrability (Re of the quadratic coefficient <= 0)."""


class AliasError(DissipairError):
    """Grid wavefunction does not decay at the boundary."""


class NoConvergence(DissipairError):
    """Adaptive quadrature hit its subdivision limit."""
