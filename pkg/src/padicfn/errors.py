"""Exception hierarchy.

Every failure mode a caller can provoke through the public API has its
own class so reports and tests can name the error rather than match
message text.
"""


class PadicfnError(Exception):
    """Base class for all library errors."""


# -- valued field ----------------------------------------------------------

class NotPrime(PadicfnError):
    """The configured prime is not prime."""


class NegativeValuation(PadicfnError):
    """Residue reduction of an element outside the ring of integers."""


class RootsUnavailable(PadicfnError):
    """Requested roots of unity do not exist in the p-adic integers."""


# -- series ----------------------------------------------------------------

class EmptyWindow(PadicfnError):
    """No product coefficient is guaranteed correct."""


class OutsideRadius(PadicfnError):
    """Evaluation or recentering point outside the certified radius."""


class Uncertifiable(PadicfnError):
    """Truncated series carries no tail bound, so no floor can be given."""


class DuplicatePoint(PadicfnError):
    """Zero prescription lists the same point twice."""


class ZeroPoint(PadicfnError):
    """Zero prescription lists the origin; use the order parameter instead."""


# -- polygon ---------------------------------------------------------------

class OutsideReliableWindow(PadicfnError):
    """Polygon query at a log-radius the tail bound does not certify."""


class ZeroSeries(PadicfnError):
    """Operation undefined for the identically zero series."""


class ConstantSeries(PadicfnError):
    """Operation undefined for constant series."""


# -- weierstrass -----------------------------------------------------------

class NotDominant(PadicfnError):
    """Divisor polynomial is not dominant at the working radius."""


class NeedExtremal(PadicfnError):
    """Laurent dividend requires an extremal divisor, got merely dominant."""


class NotUnit(PadicfnError):
    """Series has distinct extreme indices at the radius, hence zeros there."""


class NoContraction(PadicfnError):
    """Preparation iteration would not contract; radius is uncertified."""


class IncompatibleSlope(PadicfnError):
    """Extremal factor would need coefficients outside the rational field."""


# -- nevanlinna ------------------------------------------------------------

class RequiresExact(PadicfnError):
    """Multiplicity-sensitive computation on a truncated series."""


class DerivativeVanishes(PadicfnError):
    """The derivative is identically zero."""


class TooFewTargets(PadicfnError):
    """Second main theorem needs at least three targets."""


class NotCoprime(PadicfnError):
    """Inputs share a nonconstant polynomial factor."""


# -- schnirelman -----------------------------------------------------------

class UnsplitDenominator(PadicfnError):
    """Denominator does not factor into rational linear factors."""


class PoleOnCircle(PadicfnError):
    """A pole lies exactly on the integration circle."""


class OnCircle(PadicfnError):
    """The Cauchy-formula point lies exactly on the circle."""


# -- cli -------------------------------------------------------------------

class ParseError(PadicfnError):
    """Malformed input document."""

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ValidationError(PadicfnError):
    """Well-formed but semantically invalid input document."""

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class UnknownSuite(PadicfnError):
    """Verification suite name not recognized."""
