"""Exception types shared across the package."""

from __future__ import annotations


class PoslabError(Exception):
    """Base class for all package specific errors."""


class NotTransverse(PoslabError):
    """Two flags fail transversality at some level."""


class FloatAmbiguous(PoslabError):
    """A float mode sign decision fell below the resolution threshold."""


class FloatModeUnsupported(PoslabError):
    """An operation that requires exact arithmetic received float data."""


class NotInOpenSemigroup(PoslabError):
    """A unipotent element is not in the open positive semigroup."""


class NonPositiveParameter(PoslabError):
    """A cone parameter that must be strictly positive is not."""


class NotInDiamond(PoslabError):
    """A flag is outside the diamond required by the operation."""


class EmptyGeneratorSet(PoslabError):
    """A scan was asked to run with no generators."""


class NestingNotCertified(PoslabError):
    """Sampled membership failed to certify a nesting hypothesis."""


class PingPongViolated(PoslabError):
    """The ping pong condition fails for the requested generators."""


class NotCauchyAtDepth(PoslabError):
    """A limit extraction did not reach the Cauchy threshold in time."""


class DegenerateSlackSet(PoslabError):
    """A slack set needed for averaging came out empty."""


class UnknownSuite(PoslabError):
    """Unknown suite name passed to the runner."""


class ConfigInvalid(PoslabError):
    """Suite configuration failed validation."""


class OptimizationDidNotConverge(PoslabError):
    """A derivative free search hit its budget before the tolerance."""


class PositivityFailed(PoslabError):
    """A boundary sample expected to be positive is not."""
