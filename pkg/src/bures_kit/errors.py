"""Exception and warning classes raised by bures_kit."""


class BuresKitError(Exception):
    """Base class for all library errors."""


class NonHermitian(BuresKitError, ValueError):
    pass


class NotPositive(BuresKitError, ValueError):
    pass


class NotNormalized(BuresKitError, ValueError):
    pass


class DimensionMismatch(BuresKitError, ValueError):
    pass


class DomainError(BuresKitError, ValueError):
    pass


class ConvergenceFailure(BuresKitError, RuntimeError):
    pass


class NonPositiveScale(BuresKitError, ValueError):
    pass


class NegativeWeight(BuresKitError, ValueError):
    pass


class SingularState(BuresKitError, ValueError):
    pass


class SingularAmplitude(BuresKitError, ValueError):
    pass


class SingularOperator(BuresKitError, ValueError):
    pass


class VanishingOverlap(BuresKitError, ValueError):
    pass


class NotClosed(BuresKitError, ValueError):
    pass


class NotTracePreserving(BuresKitError, ValueError):
    pass


class ParseError(BuresKitError, ValueError):
    pass


class UnknownSuite(BuresKitError, ValueError):
    pass


class SingularSupport(UserWarning):
    """The Lyapunov residual is large: the curve leaves the support of rho."""


class NotConverged(UserWarning):
    """An optimizer stopped at max_iter; the best iterate is returned."""


class RegularizationWarning(UserWarning):
    """A singular state was replaced by (1 - eps) rho + eps I / d or rho + eps I."""


class CurveResolutionWarning(UserWarning):
    """Adjacent states of a sampled curve are further apart than curve_step_tol."""
