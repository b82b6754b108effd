"""Exception types shared across the package."""


class SbfeError(Exception):
    """Base class for all package-specific errors."""


class SizeExceeded(SbfeError):
    """An operation was asked to enumerate more state than its cap allows."""


class ModeMismatch(SbfeError):
    """An exact-arithmetic operation was invoked on a float-mode instance (or vice versa)."""


class InvalidStrategy(SbfeError):
    """A strategy repeated a test, stopped before determination, or is malformed."""


class NotReadOnceDnf(SbfeError):
    """The formula is not a read-once DNF (negations or shared variables present)."""


class PreconditionViolated(SbfeError):
    """An operation's stated precondition does not hold for the given input."""


class ParameterError(SbfeError):
    """A generator was called with parameters outside its valid range."""


class HypothesisViolated(SbfeError):
    """Inputs to a lemma checker do not satisfy the lemma's hypotheses."""


class SchemaError(SbfeError):
    """A JSON document does not match the expected schema."""
