"""Exception hierarchy.

Every verifier is total over its declared domain; anything outside raises one
of these instead of returning inf/nan.
"""


class OplabError(Exception):
    """Base class for all errors raised by oplab."""


class DomainError(OplabError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(DomainError):
    """A denominator vanished (e.g. 1 - conj(w) z == 0)."""


class BoundaryError(DomainError):
    """A value that must lie in the open disk has modulus >= 1."""


class ConfluenceError(DomainError):
    """Two nodes are too close for a difference quotient, or too close to be
    safely identified."""


class SeparationError(DomainError):
    """Points that must be pairwise distinct are closer than the floor."""


class PoleError(DomainError):
    """Evaluation at a pole of a rational function."""


class NotContractionError(DomainError):
    """A matrix required to be a contraction has norm > 1 + tolerance."""


class NegativityError(DomainError):
    """A matrix required to be positive semidefinite has a clearly negative
    eigenvalue."""


class InfeasibleError(DomainError):
    """A factorization problem (Douglas / Parrott) has no solution."""


class StrictnessError(DomainError):
    """A strict contraction was required."""


class GapError(DomainError):
    """Spectra that must be disjoint are too close."""


class SingularityError(OplabError, ArithmeticError):
    """A linear system is numerically singular despite a spectral gap."""


class ContourError(DomainError):
    """No separating circle exists in the candidate family."""


class CommutativityError(DomainError):
    """Matrices in a tuple do not commute."""


class ConvergenceError(OplabError, RuntimeError):
    """An iterative kernel hit its iteration cap."""


class UnknownSuiteError(OplabError, KeyError):
    """The requested verification suite does not exist."""
