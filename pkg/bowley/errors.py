"""
Exception types shared by every bowley module.

Each failure carries a stable upper-snake error code so the command-line layer
can log and map it without parsing messages.
"""


class BowleyError(Exception):
    """Base exception for analysis failures."""

    code = "BOWLEY_ERROR"

    def __init__(self, message: str, code: str | None = None):
        self.code = code or type(self).code
        self.message = message
        super().__init__(f"{self.code}: {message}")


class CsvError(BowleyError):
    """A CSV panel could not be ingested."""

    code = "CSV_ERROR"

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"line {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class MalformedCsv(CsvError):
    code = "MALFORMED_CSV"


class NonPositiveValue(CsvError):
    code = "NON_POSITIVE_VALUE"


class NonUniformYearStep(CsvError):
    code = "NON_UNIFORM_YEAR_STEP"


class TooFewRows(CsvError):
    code = "TOO_FEW_ROWS"


class DegenerateDesign(BowleyError):
    code = "DEGENERATE_DESIGN"


class NonFiniteResidual(BowleyError):
    code = "NON_FINITE_RESIDUAL"


class SingularNormalMatrix(BowleyError):
    code = "SINGULAR_NORMAL_MATRIX"


class NonFiniteValue(BowleyError):
    code = "NON_FINITE_VALUE"


class InitOutOfRange(BowleyError):
    code = "INIT_OUT_OF_RANGE"


class DegenerateFit(BowleyError):
    code = "DEGENERATE_FIT"


class LengthMismatch(BowleyError):
    code = "LENGTH_MISMATCH"


class ZeroDivisor(BowleyError):
    code = "ZERO_DIVISOR"


class NonPositiveRate(BowleyError):
    code = "NON_POSITIVE_RATE"


class NonPositiveInput(BowleyError):
    code = "NON_POSITIVE_INPUT"


class ZeroExponent(BowleyError):
    code = "ZERO_EXPONENT"


class OutOfRange(BowleyError):
    code = "OUT_OF_RANGE"


class ZeroScaleCoefficient(BowleyError):
    code = "ZERO_SCALE_COEFFICIENT"


class ZeroDenominator(BowleyError):
    code = "ZERO_DENOMINATOR"


class AtCapacity(BowleyError):
    code = "AT_CAPACITY"


class EmptySeries(BowleyError):
    code = "EMPTY_SERIES"


class ReportIoError(BowleyError):
    code = "IO_ERROR"


class UsageError(BowleyError):
    """Arguments that parse but do not fit together."""

    code = "USAGE"
