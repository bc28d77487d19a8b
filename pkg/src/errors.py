"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Exception hierarchy shared by all packages
"""


class PolarWienerError(Exception):
    """Base class for every error raised by the library."""


class GridError(PolarWienerError):
    """Invalid grid, mismatched grids, or a non-uniform grid read from disk."""


class NonPositivePath(PolarWienerError):
    """A path expected in the positive cone has a value <= 0."""


class InvalidDiffeo(PolarWienerError):
    """A grid diffeomorphism violates its representation invariants."""


class DomainError(PolarWienerError, ValueError):
    """Parameters fall outside the domain of a closed-form expression."""


class QuadratureFailure(PolarWienerError):
    """Adaptive quadrature could not meet the requested error estimate."""


class NormTooLarge(PolarWienerError):
    """Inverse Schwarzian requested for a right-hand side with sup-norm above 1/4."""


class NoConvergence(PolarWienerError):
    """Fixed-point iteration exhausted its iteration budget."""


class ProposalMismatch(PolarWienerError):
    """An importance proposal does not cover the support of the target."""


class DegenerateWeights(PolarWienerError):
    """Importance weights collapsed onto too few samples."""


class VanishingPath(PolarWienerError):
    """A complex path comes too close to the origin to be decomposed."""


class BranchJump(PolarWienerError):
    """Adjacent-node phase increment too large to unwrap the argument."""
