"""Grid-path (VPG/CPG) representations with mim-width decompositions, plus exact and
approximate solvers for Independent Set and Dominating Set."""

from .decomposition import (
    BranchDecomposition,
    build_caterpillar_decomposition,
    caterpillar,
    clique_augment,
    decompose,
    decomposition_mim_width,
    decomposition_mm_width,
    endpoint_normalize,
)
from .errors import (
    BudgetExceeded,
    ClassBudgetExceeded,
    FormatError,
    GenerationExhausted,
    InstanceTooLarge,
    PreconditionError,
    UnknownVertexError,
    VpgError,
)
from .graph import Cut, Graph, intersection_graph
from .model import (
    Constraints,
    Flavor,
    GridPath,
    GridPoint,
    GridRep,
    parse_representation,
    serialize_representation,
    validate,
)
from .ptas import baker_ds, baker_is
from .solvers import Kind, Solution, brute_force_ds, brute_force_is, solve_ds_bd, solve_is_bd, verify_solution

__version__ = "0.1.0"

__all__ = [
    "BranchDecomposition", "BudgetExceeded", "ClassBudgetExceeded", "Constraints", "Cut", "Flavor",
    "FormatError", "GenerationExhausted", "Graph", "GridPath", "GridPoint", "GridRep", "InstanceTooLarge",
    "Kind", "PreconditionError", "Solution", "UnknownVertexError", "VpgError", "baker_ds", "baker_is",
    "brute_force_ds", "brute_force_is", "build_caterpillar_decomposition", "caterpillar", "clique_augment",
    "decompose", "decomposition_mim_width", "decomposition_mm_width", "endpoint_normalize",
    "intersection_graph", "parse_representation", "serialize_representation", "solve_ds_bd",
    "solve_is_bd", "validate", "verify_solution",
]
