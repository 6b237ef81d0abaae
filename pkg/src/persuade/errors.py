"""Exception types shared across the package."""


class PersuadeError(Exception):
    """Base class for all package errors."""


class ValidationError(PersuadeError):
    """A game, belief or structure failed an invariant check."""


class ParseError(PersuadeError):
    """A game specification file could not be parsed."""


class BayesViolation(ValidationError):
    """Weighted posteriors do not average back to the prior."""


class Infeasible(PersuadeError):
    """No Bayes-plausible support exists for the requested constraint set."""


class NotAffinelyIndependent(PersuadeError):
    """Operation requires an affinely independent support."""


class DegenerateRegion(PersuadeError):
    """Action region has lower affine dimension than the simplex boundary."""


class DomainError(PersuadeError):
    """Parameter outside the domain where the construction is defined."""


class PreconditionUnmet(PersuadeError):
    """A check's hypothesis does not hold for the supplied game."""


class ScaleExceeded(PersuadeError):
    """Problem size above the declared desk-scale limits."""


class EmptyInterval(PersuadeError):
    """Conditional expectation over an interval that carries no mass."""
