"""Exception types shared across the package."""


class ProblemFormatError(ValueError):
    """Raised when a problem file or dict cannot be parsed.

    Carries optional line/column information for JSON syntax errors so the
    CLI can point at the offending location.
    """

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, column {self.column})"
        return base


class SizeCapError(ValueError):
    """Raised when a problem exceeds an enumeration or simulation size cap."""


class OptimizerDivergence(RuntimeError):
    """Raised when an optimizer encounters non-finite energies or gradients."""
