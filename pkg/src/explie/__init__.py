"""Exp-polynomial Lie algebras, their modules, and weight spaces of induced quotients."""

__version__ = "0.1.0"

from .exactnum import P, Scalar, ExactMatrix, mat_det, mat_rank, mat_nullspace, parse_scalar  # noqa: E402
from .exppoly import ExpPoly, evaluate, expand_in_subset, independence_grid, substitute_affine  # noqa: E402
from .algebra import AlgebraSpec, Generator, registry_algebra, check_axioms  # noqa: E402
from .gmodule import ModuleSpec, registry_module, check_compatibility  # noqa: E402
from .induce import InducedModule, PBWWord  # noqa: E402
from .quotient import dim_symbolic, dim_truncated, radical_membership  # noqa: E402

__all__ = [
    "P", "Scalar", "ExactMatrix", "mat_det", "mat_rank", "mat_nullspace", "parse_scalar",
    "ExpPoly", "evaluate", "expand_in_subset", "independence_grid", "substitute_affine",
    "AlgebraSpec", "Generator", "registry_algebra", "check_axioms",
    "ModuleSpec", "registry_module", "check_compatibility",
    "InducedModule", "PBWWord",
    "dim_symbolic", "dim_truncated", "radical_membership",
]
