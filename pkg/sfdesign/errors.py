"""Exception hierarchy for design construction and evaluation."""


class DesignError(ValueError):
    """Base class for every error raised by the library."""


class InvalidDimensionError(DesignError):
    """A run count, factor count or level count is out of range."""


class DimensionMismatchError(DesignError):
    """Two inputs that must agree in shape do not."""


class DegenerateInputError(DesignError):
    """Input columns are linearly dependent."""


class InfiniteEnergyError(DesignError):
    """Two design points coincide, so an inverse-distance sum diverges."""


class ZeroVarianceError(DesignError):
    """A column is constant, so its correlation is undefined."""


class BudgetExceededError(DesignError):
    """An exact enumeration would exceed the configured budget."""


class ConstructionError(DesignError):
    """Inputs do not satisfy the preconditions of a construction."""


class UnsupportedOrderError(ConstructionError):
    """No implemented construction yields a Hadamard matrix of this order."""


class DivisibilityError(DesignError):
    """Run size is not a multiple of the requested level count."""


class WrongCardinalityError(DesignError):
    """Point count does not match b^m."""


class AsymmetricArrayError(DesignError):
    """An orthogonal array has unequal level counts where equal ones are required."""


class OAParseError(DesignError):
    """An orthogonal-array text file could not be parsed."""


class StrengthViolationError(DesignError):
    """An orthogonal array fails its declared strength.

    Args:
        message: Human readable description
        witness: The first violating column subset and level tuple
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class CsvFormatError(DesignError):
    """A design CSV file is malformed.

    Args:
        message: Human readable description
        line: 1-based line number of the offending row, if known
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(DesignError):
    """A configuration file or environment override is invalid."""
