"""redlab: a verification lab for size-bounded reductions between
reachability, satisfiability, cover, and matching problems."""

from .instances import (
    Ap2dmInstance,
    CnfFormula,
    Digraph,
    LinSystem,
    Parity,
    ParseError,
    SizeParam,
    SizeParamError,
    UGraph,
    Unit,
    Violation,
    XceInstance,
    XorSystem,
    parse,
    serialize,
    size_param,
    validate,
)
from .oracles import (
    BudgetError,
    solve_2cvc,
    solve_2sat,
    solve_ap2dm,
    solve_dstcon,
    solve_lin,
    solve_xce,
    solve_xor2sat,
)
from .reductions import REDUCTIONS, PreconditionError, ReductionReport
from .harness import GenSpec, GenerationError, VerifyResult, generate

__all__ = [
    "Ap2dmInstance", "CnfFormula", "Digraph", "LinSystem", "Parity",
    "ParseError", "SizeParam", "SizeParamError", "UGraph", "Unit",
    "Violation", "XceInstance", "XorSystem", "parse", "serialize",
    "size_param", "validate",
    "BudgetError", "solve_2cvc", "solve_2sat", "solve_ap2dm", "solve_dstcon",
    "solve_lin", "solve_xce", "solve_xor2sat",
    "REDUCTIONS", "PreconditionError", "ReductionReport",
    "GenSpec", "GenerationError", "VerifyResult", "generate",
]
