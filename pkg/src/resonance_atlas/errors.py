"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class ResonanceAtlasError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ResonanceAtlasError):
    """An argument lies outside the supported domain of an operation."""


class ConvergenceError(ResonanceAtlasError):
    """An iterative procedure (Newton, winding refinement, quadrature) failed
    to converge within its configured budget."""


class FitError(ResonanceAtlasError):
    """A regression or bound check had too little usable data."""
