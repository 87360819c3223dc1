"""Compile mixed quadratic problems with linear constraints into QUBO and Ising form."""
from .binarize import BinarizationMap, Encoding, build_map, decode, encode_domain, substitute
from .errors import (
    CapacityError,
    DimensionError,
    DomainError,
    InfeasibleError,
    QubifyError,
    ValidationError,
)
from .model import (
    Binary,
    Continuous,
    Discrete,
    Embedding,
    Integer,
    Ising,
    MixedProblem,
    Qubo,
    Solution,
    Spin,
    Violation,
    absorb_linear,
    evaluate,
    fix_variables,
    ising_to_qubo,
    qubo_to_ising,
)
from .penalty import CompileOptions, CompilePlan, compile_problem, preanalyze, rho_bound
from .solve import AnnealParams, SolveReport, anneal, brute_force, check_feasibility
from .tensor import QuadExpr, kron, kron_chain, squared_residual

__version__ = "0.1.0"

__all__ = [
    "AnnealParams",
    "BinarizationMap",
    "Binary",
    "CapacityError",
    "CompileOptions",
    "CompilePlan",
    "Continuous",
    "DimensionError",
    "Discrete",
    "DomainError",
    "Embedding",
    "Encoding",
    "InfeasibleError",
    "Integer",
    "Ising",
    "MixedProblem",
    "QuadExpr",
    "QubifyError",
    "Qubo",
    "Solution",
    "SolveReport",
    "Spin",
    "ValidationError",
    "Violation",
    "absorb_linear",
    "anneal",
    "brute_force",
    "build_map",
    "check_feasibility",
    "compile_problem",
    "decode",
    "encode_domain",
    "evaluate",
    "fix_variables",
    "ising_to_qubo",
    "kron",
    "kron_chain",
    "preanalyze",
    "qubo_to_ising",
    "rho_bound",
    "squared_residual",
    "substitute",
]
