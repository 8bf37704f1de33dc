"""The generalized Virasoro algebra over M = Z + Zp with p formal.

``d_(m + k p)`` is stored as ``Generator("d", m, (k,))``.  The graded module
``V(lam, mu)`` has basis ``v_(k p)`` with ``d_(a p) v_(b p) = (lam + b p + mu a p) v_((a + b) p)``.

Level ``n`` of the induced quotient is spanned by the reduced words
``d_(-1 + k_n p) ... d_(-1 + k_1 p) v_(a - (k_1 + ... + k_n) p)`` with
``0 <= k_t <= 2t``, so its dimension is at most ``1 * 3 * ... * (2n + 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .algebra import Generator, generalized_virasoro, lie_add
from .exactnum import ONE, ZERO, ExactMatrix, P, Scalar, as_scalar, mat_nullspace, rank_of_rows
from .gmodule import ModuleSpec, vir_intermediate_module, zero_module
from .induce import InducedModule
from .quotient import gamma_grid

__all__ = [
    "MElem",
    "ReducedSpanSet",
    "odd_double_factorial",
    "vir_module",
    "vir_weight_dim",
    "vir_bound_report",
    "vir_moment_nullvector",
    "moment_null_space",
    "weight_independence_table",
    "head_combination",
    "degree_zero_combination",
]


class MElem(NamedTuple):
    """m + k p."""

    m: int
    k: int

    def to_scalar(self) -> Scalar:
        return Scalar(self.m) + P * self.k

    def __str__(self):
        return str(self.to_scalar())


def odd_double_factorial(n: int) -> int:
    """1 * 3 * ... * (2n + 1)."""
    out = 1
    for t in range(n + 1):
        out *= 2 * t + 1
    return out


@dataclass(frozen=True)
class ReducedSpanSet:
    n: int

    def indices(self) -> list[tuple[int, ...]]:
        """Tuples (k_1, ..., k_n) with 0 <= k_t <= 2t."""
        return list(itertools.product(*(range(2 * t + 1) for t in range(1, self.n + 1))))

    def __len__(self) -> int:
        return odd_double_factorial(self.n)

    def words(self, I: InducedModule, a: int) -> list:
        """The PBW words ``d_(-1+k_n p) ... d_(-1+k_1 p) v_(a - sum k)``."""
        out = []
        for ks in self.indices():
            out.append(I.monomial([(1, "d")] * self.n, [(k,) for k in reversed(ks)], I.module.J[0], (a,)))
        return out


def vir_module(lam=Fraction(1, 2), mu=Fraction(1, 3), zero: bool = False) -> ModuleSpec:
    A = generalized_virasoro()
    return zero_module(A) if zero else vir_intermediate_module(A, lam, mu)


def _induced(lam, mu, module: ModuleSpec | None, depth: int) -> InducedModule:
    return InducedModule(module or vir_module(lam, mu), depth=max(depth, 1))


def vir_weight_dim(i: int, a=0, lam=Fraction(1, 2), mu=Fraction(1, 3), module: ModuleSpec | None = None,
                   I: InducedModule | None = None) -> int:
    """dim of the weight space at degree -i and lattice weight ``a`` (an MElem or its p-coefficient)."""
    if i < 0:
        raise ValueError("level must be non-negative")
    a = a.k if isinstance(a, MElem) else int(a)
    I = I or _induced(lam, mu, module, i)
    rows = ReducedSpanSet(i).words(I, a)
    if i == 0:
        return 1 if I.module.J else 0
    shape = ((1, "d"),) * i
    col_index: dict = {}
    data = []
    grid = gamma_grid(I, shape, [(shape, I.module.J[0])], (a,))
    words = [I.raising_word(shape, g) for g in grid]
    for x in rows:
        row = {}
        for wi, w in enumerate(words):
            for key, c in I.apply_raising_word(w, {x: ONE}).items():
                col = col_index.setdefault((wi, key), len(col_index))
                row[col] = c
        data.append(row)
    ncols = len(col_index)
    if not ncols:
        return 0
    return rank_of_rows([[r.get(c, ZERO) for c in range(ncols)] for r in data], ncols)


def vir_bound_report(i_max: int = 2, lam=Fraction(1, 2), mu=Fraction(1, 3), a=0, cap: int = 3) -> list[dict]:
    """Rows (i, dim, bound, pass) for i = 0..i_max."""
    if i_max > cap:
        raise ValueError(f"i_max {i_max} exceeds cap {cap}")
    I = _induced(lam, mu, None, max(i_max, 1))
    out = []
    for i in range(i_max + 1):
        d = vir_weight_dim(i, a, I=I)
        bound = odd_double_factorial(i)
        out.append({"i": i, "dim": d, "bound": bound, "pass": d <= bound})
    return out


def moment_matrix(nodes: Sequence[int], kmax: int) -> ExactMatrix:
    """Rows k = 0..kmax of (node p)^k."""
    return ExactMatrix([[(P * x) ** k for x in nodes] for k in range(kmax + 1)], cols=len(nodes))


def vir_moment_nullvector(beta_prime, n: int) -> dict[int, Scalar]:
    """b over P_(n+1) with (beta')^k + sum_x (x p)^k b_x = 0 for 0 <= k <= 2n + 2.

    Keys are the p-coefficients 0..2n+2 of the nodes.
    """
    kp = beta_prime.k if isinstance(beta_prime, MElem) else int(beta_prime)
    if isinstance(beta_prime, MElem) and beta_prime.m:
        raise ValueError("beta' must lie in Zp")
    nodes = list(range(2 * n + 3))
    m = moment_matrix([kp] + nodes, 2 * n + 2)
    null = mat_nullspace(m)
    if len(null) != 1 or not null[0][0]:
        raise ArithmeticError("moment system is not uniquely solvable")
    v = null[0]
    return {x: v[t + 1] / v[0] for t, x in enumerate(nodes)}


def moment_null_space(nodes: Sequence[int], kmax: int) -> list[list[Scalar]]:
    """Basis of b with sum_x (x p)^k b_x = 0 for 0 <= k <= kmax."""
    return mat_nullspace(moment_matrix(nodes, kmax))


def head_combination(I: InducedModule, coeffs: dict[int, Scalar], inner: Sequence[int], a0: int,
                 head_degree: int = -1) -> dict:
    """sum_x b_x d_(head + x p) d_(-1 + inner_n p) ... d_(-1 + inner_1 p) v_(a0 - x p - sum inner).

    ``inner`` lists k_1..k_n; the returned vector has weight a0.  With
    ``head_degree = 0`` the head acts on the lower word, giving a vector of
    degree -n.
    """
    n = len(inner)
    out: dict = {}
    for x, b in sorted(coeffs.items()):
        if not b:
            continue
        word = I.monomial([(1, "d")] * n, [(k,) for k in reversed(inner)], I.module.J[0], (a0,))
        head = Generator("d", head_degree, (x,))
        base = {word._replace(base=(word.base[0] - x,)): ONE}
        for w, c in I.apply_generator(head, base).items():
            lie_add(out, w, as_scalar(b) * c)
    return out


def degree_zero_combination(I: InducedModule, coeffs: dict[int, Scalar], inner: Sequence[int], a0: int) -> dict:
    return head_combination(I, coeffs, inner, a0, head_degree=0)


def weight_independence_table(i: int, a_list: Sequence = (0, 1, 2, -1), lam=Fraction(1, 2), mu=Fraction(1, 3)) -> dict:
    """Dimensions for each a in ``a_list`` (p-coefficients) and whether they agree."""
    if i < 1:
        raise ValueError("level must be at least 1")
    I = _induced(lam, mu, None, i)
    rows = []
    for a in a_list:
        k = a.k if isinstance(a, MElem) else int(a)
        rows.append({"a": str(P * k), "k": k, "dim": vir_weight_dim(i, k, I=I)})
    dims = {r["dim"] for r in rows}
    return {"i": i, "rows": rows, "equal": len(dims) <= 1}

