"""Exception hierarchy shared by the engines and the CLI exit-code mapping."""


class PmeFrontError(Exception):
    """Base class for all package errors."""


class InvalidParameters(PmeFrontError, ValueError):
    """Inputs violate a documented precondition (CLI exit code 2)."""


class NumericalFailure(PmeFrontError, RuntimeError):
    """A solver could not deliver a result (CLI exit code 3)."""


class StepFailure(NumericalFailure):
    pass


class BracketNotFound(NumericalFailure):
    pass


class TailNotConverged(NumericalFailure):
    pass


class SpeedInversionFailed(NumericalFailure):
    pass


class CFLViolation(NumericalFailure):
    pass


class EmptySupport(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class FrontTooClose(NumericalFailure):
    pass
