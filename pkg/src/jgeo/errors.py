"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``InputError`` (bad or inconsistent input, exit 2) and ``SolverError``
(a numerical routine refused a well-formed input, exit 3).
"""


class JgeoError(Exception):
    code = "JGEO_ERROR"


class InputError(JgeoError, ValueError):
    code = "INPUT_ERROR"


class SolverError(JgeoError, ArithmeticError):
    code = "SOLVER_ERROR"


class ShapeMismatchError(InputError):
    code = "SHAPE_MISMATCH"


class NotSelfAdjointError(InputError):
    code = "NOT_SELF_ADJOINT"


class NotFaithfulError(InputError):
    code = "NOT_FAITHFUL"


class ZeroDirectionError(InputError):
    code = "ZERO_DIRECTION"


class StepTooSmallError(InputError):
    code = "STEP_TOO_SMALL"


class SchemaError(InputError):
    code = "SCHEMA_ERROR"


class ValidationError(InputError):
    """Raised when a document parses but its values violate an invariant.

    ``path`` points at the offending field, e.g. ``"state[0][1][1]"``.
    """

    code = "VALIDATION_ERROR"

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class IncompatibleTangentError(SolverError):
    code = "INCOMPATIBLE_TANGENT"


class SupportMismatchError(SolverError):
    code = "SUPPORT_MISMATCH"


class DegeneratePlaneError(SolverError):
    code = "DEGENERATE_PLANE"
