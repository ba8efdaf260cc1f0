"""Exception hierarchy shared by all modules.

Each class carries a short machine-readable ``code`` used by the CLI when it
reports failures.
"""


class ChainCodesError(Exception):
    code = "error"


class InvalidParameter(ChainCodesError, ValueError):
    code = "invalid-parameter"


class IncompatibleOperands(ChainCodesError, ValueError):
    code = "incompatible-operands"


class InvalidGenerator(ChainCodesError, ValueError):
    code = "invalid-generator"


class InvalidChain(ChainCodesError, ValueError):
    code = "invalid-chain"


class NotInLayer(ChainCodesError, ValueError):
    code = "not-in-layer"


class BudgetExceeded(ChainCodesError):
    code = "budget-exceeded"

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class PreconditionViolation(ChainCodesError):
    code = "precondition-violation"


class UnsupportedRing(ChainCodesError):
    code = "unsupported-ring"


class Unsupported(ChainCodesError):
    code = "unsupported"


class InternalConsistencyError(ChainCodesError, AssertionError):
    """Two independent computations of the same object disagreed."""

    code = "internal-consistency"


class LiftingFailure(InternalConsistencyError):
    code = "lifting-failure"


class VerificationFailure(ChainCodesError):
    code = "verification-failure"


class ParseError(InvalidParameter):
    """Malformed command line, spec string or input file."""

    code = "parse-error"
