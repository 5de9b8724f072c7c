"""Exception hierarchy.

Three branches matter to callers: ValidationError (bad input data, CLI exit
code 2), ConfigError (bad request/parameters, exit code 3) and
NumericalError (a computation produced non-finite values, exit code 4).
"""


class MetabobenchError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MetabobenchError):
    """Input data violates the table schema or value constraints."""


class MissingValueError(ValidationError):
    """A cell is empty or NaN."""


class NonPositiveIntensityError(ValidationError):
    """An intensity is zero or negative (log2 requires strictly positive)."""


class DuplicateSampleIdError(ValidationError):
    """Two rows share a sample id."""


class DuplicateFeatureError(ValidationError):
    """Two columns share a feature name within one table."""


class BadLabelError(ValidationError):
    """A label is not 0 or 1."""


class SampleMismatchError(ValidationError):
    """Tables being merged disagree on sample ids or labels."""


class SchemaError(ValidationError):
    """Malformed CSV structure: bad header, ragged row, unparseable cell."""


class ConfigError(MetabobenchError):
    """A request/parameter error rather than a data error."""


class InvalidSpecError(ConfigError):
    """A parameter object violates its declared constraints."""


class EmptyTableError(ConfigError):
    """An operation requires a non-empty table."""


class ShapeMismatchError(ConfigError):
    """Matrix dimensions do not match the fitted artifact."""


class LengthMismatchError(ConfigError):
    """Paired vectors differ in length."""


class TooFewPerClassError(ConfigError):
    """A class has fewer members than the requested fold count."""


class EmptyGridError(ConfigError):
    """A hyperparameter grid enumerates zero configurations."""


class UnknownSolverError(ConfigError):
    """Requested solver name is not implemented."""


class WrongFamilyError(ConfigError):
    """Operation requires a different model family."""


class MissingCellError(ConfigError):
    """Report layout demands a (dataset, model, mode) cell with no results."""


class EmptyAggregateError(ConfigError):
    """Aggregation over an empty collection."""


class NumericalError(MetabobenchError):
    """A computation produced non-finite values."""


class NonFiniteError(NumericalError):
    """Input or intermediate values are NaN/inf where finite values are required."""
