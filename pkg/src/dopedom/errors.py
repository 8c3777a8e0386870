"""Exception hierarchy shared by the library and the command line front end."""


class DopedOMError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DopedOMError, ValueError):
    """Malformed configuration text.

    ``line`` is the 1-based line number when the parser can locate it, and
    ``field`` the ``section.key`` name when the problem is tied to one value.
    """

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class ValidationError(DopedOMError, ValueError):
    """A parameter violates a physical invariant (positivity, ordering, ...)."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class SolverError(DopedOMError, RuntimeError):
    """A numerical routine failed to converge or found no solution."""


class RegimeError(SolverError):
    """The selected steady state lies outside the regime the model assumes."""


class UnstableError(DopedOMError, RuntimeError):
    """An operation that needs a dynamically stable system got an unstable one."""


class QuadratureError(SolverError):
    """Adaptive integration did not reach the requested tolerance.

    ``worst_interval`` holds ``(a, b, error_estimate)`` of the subinterval
    that contributed the largest error.
    """

    def __init__(self, message, worst_interval=None):
        super().__init__(message)
        self.worst_interval = worst_interval
