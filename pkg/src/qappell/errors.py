"""Exception hierarchy shared by the evaluator, the identity catalogs and the CLI."""


class QAppellError(Exception):
    """Base class for every error raised by this package."""


class DegenerateDenominator(QAppellError, ZeroDivisionError):
    """A q-shifted factorial in a divisor has a factor too close to zero."""


class DegenerateCoefficient(QAppellError, ZeroDivisionError):
    """A coefficient of an identity divides by a (near) zero quantity."""


class NoConvergence(QAppellError):
    """The series did not reach the requested tolerance within the layer cap."""


class DomainError(QAppellError, ValueError):
    """Inputs outside the supported domain (|q| >= 1, |x| >= 1, non-finite values...)."""


class UnsupportedRelation(QAppellError, ValueError):
    """An identity was requested for a kind/parameter pair the catalog does not hold."""


class UnknownIdentity(QAppellError, KeyError):
    """An identity ID string does not resolve in any catalog."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown identity"
