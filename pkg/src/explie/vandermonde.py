"""Extended (confluent exponential) Vandermonde matrices.

For distinct nonzero bases ``a_1..a_m`` with multiplicities ``s_1..s_m`` the
functions ``n^t a_j^n`` (``t < s_j``) evaluated at ``n = 0..s-1`` form a square
matrix whose determinant has the closed form

    prod_j sf(s_j - 1) * a_j^(s_j (s_j - 1) / 2) * prod_{i<j} (a_j - a_i)^(s_i s_j)

where ``sf`` is the superfactorial ``sf(m) = m! (m-1)! ... 1!``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .exactnum import ONE, ExactMatrix, Scalar, as_scalar, mat_det, mat_nullspace, mat_rank
from .exppoly import ExpPoly, evaluate, grid_matrix, independence_grid

__all__ = [
    "VSpec",
    "superfactorial",
    "build_matrix",
    "det_closed_form",
    "functions",
    "reduce_system",
    "reduce_system_multivar",
    "ReducedSystem",
    "random_vspec",
    "same_subspace",
]


def superfactorial(m: int) -> int:
    """m! * (m-1)! * ... * 1!, with the empty product for m = 0."""
    out = 1
    for k in range(1, m + 1):
        out *= factorial(k)
    return out


@dataclass(frozen=True)
class VSpec:
    blocks: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        blocks = tuple((Fraction(a), int(s)) for a, s in self.blocks)
        if not blocks:
            raise ValueError("VSpec needs at least one block")
        bases = [a for a, _ in blocks]
        if any(a == 0 for a in bases):
            raise ValueError("bases must be nonzero")
        if len(set(bases)) != len(bases):
            raise ValueError("bases must be distinct")
        if any(s < 1 for _, s in blocks):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "blocks", blocks)

    @property
    def s(self) -> int:
        return sum(s for _, s in self.blocks)

    def to_json(self) -> list:
        return [[str(a), s] for a, s in self.blocks]


def functions(spec: VSpec) -> list[ExpPoly]:
    """The column functions n^t a^n in block order."""
    out = []
    for a, s in spec.blocks:
        for t in range(s):
            out.append(ExpPoly.monomial((t,), (a,)))
    return out


def build_matrix(spec: VSpec) -> ExactMatrix:
    fs = functions(spec)
    return ExactMatrix([[evaluate(f, (n,)) for f in fs] for n in range(spec.s)], cols=spec.s)


def det_closed_form(spec: VSpec) -> Scalar:
    val = Fraction(1)
    for a, s in spec.blocks:
        val *= superfactorial(s - 1) * a ** (s * (s - 1) // 2)
    for i, (ai, si) in enumerate(spec.blocks):
        for aj, sj in spec.blocks[i + 1:]:
            val *= (aj - ai) ** (si * sj)
    return Scalar(val)


def random_vspec(rng: random.Random, max_blocks: int = 4, max_mult: int = 3, bound: int = 5) -> VSpec:
    """Distinct nonzero rational bases with numerator and denominator in [-bound, bound]."""
    m = rng.randint(1, max_blocks)
    bases: list[Fraction] = []
    while len(bases) < m:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        a = Fraction(num, den)
        if a != 0 and a not in bases and abs(a) <= bound:
            bases.append(a)
    return VSpec(tuple((a, rng.randint(1, max_mult)) for a in bases))


def same_subspace(u: Sequence[Sequence[Scalar]], v: Sequence[Sequence[Scalar]], dim: int) -> bool:
    """Whether two lists of vectors span the same subspace."""
    ru = mat_rank(ExactMatrix(u, cols=dim)) if u else 0
    rv = mat_rank(ExactMatrix(v, cols=dim)) if v else 0
    if ru != rv:
        return False
    both = list(u) + list(v)
    return (mat_rank(ExactMatrix(both, cols=dim)) if both else 0) == ru


@dataclass
class ReducedSystem:
    finite: ExactMatrix
    grid_system: ExactMatrix
    transform: ExactMatrix
    grid: list[tuple[int, ...]]
    transform_det: Scalar
    finite_null: list[list[Scalar]] = field(default_factory=list)
    grid_null: list[list[Scalar]] = field(default_factory=list)

    @property
    def equivalent(self) -> bool:
        return same_subspace(self.finite_null, self.grid_null, self.finite.cols)


class ReductionError(RuntimeError):
    pass


def _coefficient_matrix(d: Mapping[tuple[int, int], object], nfun: int) -> tuple[list[int], ExactMatrix]:
    unknowns = sorted({k for k, _ in d})
    for _, j in d:
        if not 0 <= j < nfun:
            raise ValueError(f"function index {j} out of range")
    rows = [[as_scalar(d.get((k, j), 0)) for k in unknowns] for j in range(nfun)]
    return unknowns, ExactMatrix(rows, cols=len(unknowns))


def _reduce(finite: ExactMatrix, transform: ExactMatrix, grid) -> ReducedSystem:
    tdet = mat_det(transform) if transform.rows == transform.cols else None
    if tdet is not None and not tdet:
        raise ReductionError("singular evaluation matrix")
    if tdet is None and mat_rank(transform) != transform.cols:
        raise ReductionError("evaluation matrix lacks full column rank")
    grid_system = transform @ finite
    return ReducedSystem(
        finite=finite,
        grid_system=grid_system,
        transform=transform,
        grid=list(grid),
        transform_det=tdet if tdet is not None else ONE,
        finite_null=mat_nullspace(finite),
        grid_null=mat_nullspace(grid_system),
    )


def reduce_system(d: Mapping[tuple[int, int], object], spec: VSpec) -> ReducedSystem:
    """Finite form of ``sum_k (sum_j d[k, j] f_j(n)) c_k = 0 for all n``.

    ``d`` maps (unknown index k, function index j) to a coefficient, with the
    ``f_j`` the columns of :func:`build_matrix`.  The equations evaluated at
    ``n = 0..s-1`` are the Vandermonde transform of the finite system
    ``sum_k d[k, j] c_k = 0``.
    """
    _, finite = _coefficient_matrix(d, spec.s)
    return _reduce(finite, build_matrix(spec), [(n,) for n in range(spec.s)])


def reduce_system_multivar(d: Mapping[tuple[int, int], object], signatures) -> ReducedSystem:
    """Several-variable version: functions are n^delta b^n monomials given by signatures."""
    _, finite = _coefficient_matrix(d, len(signatures))
    grid = independence_grid(signatures)
    return _reduce(finite, grid_matrix(signatures, grid), grid)
