"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the front end never has
to keep its own table in sync with the library.
"""


class NHThermoError(Exception):
    exit_code = 1


class ParseError(NHThermoError, ValueError):
    exit_code = 2


class InvalidParameter(NHThermoError, ValueError):
    exit_code = 2


class DimensionOverflow(NHThermoError, ValueError):
    exit_code = 2


class ComplexSpectrum(NHThermoError, ValueError):
    exit_code = 3


class DegenerateSpectrum(NHThermoError, ValueError):
    exit_code = 3


class NotPositiveDefinite(NHThermoError, ValueError):
    exit_code = 3


class NotDHermitian(NHThermoError, ValueError):
    exit_code = 3


class InvalidState(NHThermoError, ValueError):
    exit_code = 3


class TargetOutsideHull(NHThermoError, ValueError):
    exit_code = 4

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class TargetOnBoundary(NHThermoError, ValueError):
    exit_code = 4

    def __init__(self, message, facet=None):
        super().__init__(message)
        self.facet = facet


class ConvergenceFailure(NHThermoError, RuntimeError):
    exit_code = 5


class MaxIterations(ConvergenceFailure):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class QuadratureFailure(ConvergenceFailure):
    pass
