"""Exception hierarchy shared by all modules."""


class PropHeckeError(Exception):
    """Base class for all library errors."""


class NonCrystallographic(PropHeckeError):
    """A reflection fails to permute the root list."""


class PairingDegenerate(PropHeckeError):
    """The X x Y pairing is not perfect, or <alpha, alpha_vee> != 2."""


class NotInParabolic(PropHeckeError):
    """Element's finite part lies outside the requested W_J."""


class CoverMismatch(PropHeckeError):
    """Operands belong to different covers."""


class CoverInvalid(PropHeckeError):
    """Cover tables violate a validated relation."""


class AlgebraMismatch(PropHeckeError):
    """Operands belong to different algebra handles."""


class ParamInvalid(PropHeckeError):
    """Parameter set violates an equivariance condition."""


class NotPositive(PropHeckeError):
    """Support element is not J-positive."""


class NotTranslation(PropHeckeError):
    """Element is not a lift of a translation."""


class HalfIntegerExponent(PropHeckeError):
    """Integral-basis exponent came out non-integral."""


class PoleAtZero(PropHeckeError):
    """Scalar has a pole at q = 0."""


class FieldTooSmall(PropHeckeError):
    """Base field lacks a required root of unity."""


class NotPermissible(PropHeckeError):
    """(Xi, V) fails the permissibility conditions."""


class InfiniteIndex(PropHeckeError):
    """A required subgroup index is not finite."""


class NotStandardPair(PropHeckeError):
    """(J, Gamma) has infinite W_Gamma."""


class SearchBudget(PropHeckeError):
    """Graph search exceeded its node budget; result would be uncertified."""


class CriteriaDisagree(PropHeckeError):
    """Supersingularity criteria returned different verdicts."""


class BoundTooSmall(PropHeckeError):
    """Trace certificate incomplete within the configured bound."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigError(PropHeckeError):
    """Malformed experiment configuration."""
