"""Riemannian geometry of state spaces of finite-dimensional C*-algebras, built on the Jordan product."""

from .algebra import AlgebraShape, Element, group_exp, hermitian_basis, jordan, lie, mul, trace_pair
from .errors import (
    DegeneratePlaneError,
    IncompatibleTangentError,
    InputError,
    JgeoError,
    NotFaithfulError,
    NotSelfAdjointError,
    SchemaError,
    ShapeMismatchError,
    SolverError,
    StepTooSmallError,
    SupportMismatchError,
    ValidationError,
    ZeroDirectionError,
)
from .orbits import (
    PositiveFunctional,
    RankSignature,
    StateFunctional,
    TangentVector,
    act_positive,
    act_state,
    expectation,
    gradient_vec,
    hamiltonian_vec,
    rank_signature,
    tangent_from_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraShape",
    "Element",
    "group_exp",
    "hermitian_basis",
    "jordan",
    "lie",
    "mul",
    "trace_pair",
    "DegeneratePlaneError",
    "IncompatibleTangentError",
    "InputError",
    "JgeoError",
    "NotFaithfulError",
    "NotSelfAdjointError",
    "SchemaError",
    "ShapeMismatchError",
    "SolverError",
    "StepTooSmallError",
    "SupportMismatchError",
    "ValidationError",
    "ZeroDirectionError",
    "PositiveFunctional",
    "RankSignature",
    "StateFunctional",
    "TangentVector",
    "act_positive",
    "act_state",
    "expectation",
    "gradient_vec",
    "hamiltonian_vec",
    "rank_signature",
    "tangent_from_pair",
]
