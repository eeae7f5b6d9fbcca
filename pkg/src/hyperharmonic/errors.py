"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class ValidationError(ValueError):
    """Malformed or inconsistent input: bad tables, indices, shapes, or config."""


class EstimationError(ValidationError):
    """An estimator is undefined on the supplied data (e.g. a constant column)."""


class NumericalError(ArithmeticError):
    """A numerical routine failed or produced an unusable result."""


class CapacityError(RuntimeError):
    """The requested problem size exceeds the configured dense-computation caps."""
