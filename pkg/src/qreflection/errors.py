"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure did not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message if achieved is None
                         else f"{message} (achieved {achieved:.3g})")
        self.achieved = achieved


class ConfigError(ValueError):
    """Malformed material configuration file."""

    def __init__(self, message, path=None, line=None, field=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{': '.join([', '.join(where), message]) if where else message}")
        self.path = path
        self.line = line
        self.field = field
