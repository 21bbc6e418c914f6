"""Exception hierarchy shared by every morphglide module."""


class MorphGlideError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDiscretizationError(MorphGlideError, ValueError):
    pass


class ImplausibleMorphError(MorphGlideError, ValueError):
    pass


class ResolutionError(MorphGlideError, ValueError):
    pass


class IncomparableProfilesError(MorphGlideError, ValueError):
    pass


class GeometryError(MorphGlideError, ValueError):
    """Degenerate, self-intersecting or otherwise unusable geometry."""


class InvertedElementError(MorphGlideError, ArithmeticError):
    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class NonConvergenceError(MorphGlideError, RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UnderdeterminedFitError(MorphGlideError, ValueError):
    pass


class ExtrapolationError(MorphGlideError, ValueError):
    pass


class ModelValidityError(MorphGlideError, ValueError):
    pass


class ContractError(MorphGlideError, ValueError):
    """A caller violated a documented precondition."""


class NoSteadyGlideError(MorphGlideError, ValueError):
    pass


class ScheduleError(MorphGlideError, ValueError):
    pass


class ConfigError(MorphGlideError, ValueError):
    pass


class SweepError(MorphGlideError, RuntimeError):
    """One or more cells of a sweep failed; completed results are attached."""

    def __init__(self, message, results=None, failures=None):
        super().__init__(message)
        self.results = results or []
        self.failures = failures or []
