"""Exception types shared across the package."""


class CharCensusError(Exception):
    """Base class for all charcensus errors."""


class NotPrime(CharCensusError):
    """The requested characteristic is not a prime number."""


class EvenCharacteristic(CharCensusError):
    """Characteristic 2 requested; the quadratic character needs odd q."""


class FieldTooLarge(CharCensusError):
    """Field cardinality exceeds the supported table bounds."""


class CensusBudgetExceeded(CharCensusError):
    """An exhaustive sweep would visit more polynomials than the budget allows."""


class HistogramOverflow(CharCensusError):
    """A census would overflow the 64-bit histogram counters."""


class SamplingStalled(CharCensusError):
    """Rejection sampling exceeded its trial cap (defensive; should not happen)."""


class InvalidMode(CharCensusError):
    """Unknown run mode; expected 'exhaustive' or 'montecarlo'."""


class ModelMismatch(CharCensusError):
    """Empirical data and model prediction were built for different fields."""


# Division by zero in a field is an ordinary ZeroDivisionError.
DivisionByZero = ZeroDivisionError
