class PacsError(Exception):
    """ Base class of every error raised by the pacs core. """


class DomainError(PacsError, ValueError):
    """ An argument lies outside the domain of a function (e.g. log_gamma(0), |z| beyond the radius). """


class ParameterError(PacsError, ValueError):
    """ Invalid parameters of a system, a series or a contour. """


class DivergenceError(PacsError, ArithmeticError):
    """ A series diverges or leaves the double precision range. """


class ConvergenceError(PacsError, ArithmeticError):
    """ A series or a quadrature exhausted its budget before reaching the tolerance. """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class UndefinedStatisticError(PacsError, ArithmeticError):
    """ A photon statistic is requested for a state with <N> = 0. """


class ConfigError(PacsError, ValueError):
    def __init__(self, message: str, line: int = None, field: str = None):
        location = []
        if line is not None:
            location.append(f'line {line}')
        if field is not None:
            location.append(f'field {field}')
        super().__init__(f"{', '.join(location)}: {message}" if location else message)
        self.line = line
        self.field = field
