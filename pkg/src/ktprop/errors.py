class KTError(Exception):
    """Base class for library errors."""


class ContractError(KTError, ValueError):
    """Inputs violate an operation's contract (dimension mismatch, malformed data)."""


class PreconditionError(KTError, ValueError):
    """Inputs are well-formed but outside an operation's hypotheses, e.g. not nef and big."""


class DegenerateError(PreconditionError):
    """A polytope is not full-dimensional where full dimension is required."""


class InequalityViolation(KTError, AssertionError):
    """A proven inequality failed numerically beyond its stated slack."""
