"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for bad input, 4 for numerical failure.  Domain errors (a valid input
outside an operation's precondition) also map to 2.
"""

from __future__ import annotations


class GitkitError(Exception):
    """Base class for all library errors."""

    exit_code = 4


class InputError(GitkitError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class ParseError(InputError):
    """Input file is not valid JSON or not in the expected layout."""


class ValidationError(InputError):
    """Input parses but violates a documented precondition."""


class NotSkewHermitian(ValidationError):
    """A proposed Lie algebra basis element is not skew-Hermitian."""


class NotClosedUnderBracket(ValidationError):
    """The span of the proposed basis is not a Lie subalgebra."""


class RankDeficientWeights(ValidationError):
    """A torus weight matrix does not have full column rank."""


class UnsupportedPreset(ValidationError):
    """The operation is not available for this kind of group."""


class ZeroInput(ValidationError):
    """An operation received the zero element where it needs a nonzero one."""


class NotPowerOfTwo(ValidationError):
    """An integer argument must be a power of two."""


class DomainError(GitkitError):
    """A mathematically meaningful precondition fails for the given data."""

    exit_code = 2


class NotToral(DomainError):
    """The element is not semisimple with imaginary spectrum."""


class NotInComplexification(DomainError):
    """A matrix does not certify as an element of the complexified group."""


class NotInLattice(DomainError):
    """The element does not exponentiate to the identity."""


class NotCritical(DomainError):
    """The point is not a critical point of the moment map squared."""


class NotUnstable(DomainError):
    """The operation needs an unstable instance."""


class NotConverged(DomainError):
    """The trajectory did not reach the gradient tolerance."""


class EmptySupport(DomainError):
    """No coordinate of the vector is above the support threshold."""


class DegeneratePlane(DomainError):
    """Two tangent vectors do not span a plane."""


class NotClosed(DomainError):
    """Generated group exceeds the enumeration bound."""


class InsufficientSamples(DomainError):
    """Not enough samples for a fit or finite difference."""


class NumericalError(GitkitError):
    """A numerical procedure failed."""

    exit_code = 4


class Singular(NumericalError):
    """A matrix that must be invertible is numerically singular."""


class PolarFailure(NumericalError):
    """Polar decomposition did not reproduce its input."""


class StepSizeUnderflow(NumericalError):
    """The ODE integrator could not make progress."""


class ConsistencyLost(NumericalError):
    """The lifted group path drifted away from the projective trajectory."""


class ExtrapolationDiverged(NumericalError):
    """Two estimates of an asymptotic direction disagree."""


class SupportAmbiguous(UserWarning):
    """A vector component lies close to the support threshold."""
