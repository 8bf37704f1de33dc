"""Weight spaces of the quotient M(V) = induced module / radical.

A vector of negative degree is radical exactly when every raising word that
brings it back to degree 0 kills it.  So dim M(V)^(-i)_alpha is the rank of
the pairing between lowering monomials and raising tests.  Two routes:

* truncated: concrete lattice points in a box on both sides (a lower bound
  that grows with the box);
* symbolic: the raising coefficients are exp-polynomials in (beta, gamma);
  splitting off the gamma dependence leaves finitely many functionals
  f_p(beta), and the rank over all beta is read off on an independence grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exactnum import ZERO, ExactMatrix, Scalar, rank_of_rows
from .exppoly import evaluate, expand_in_subset, independence_grid
from .induce import (
    DegreeError,
    InducedModule,
    PBWWord,
    WeightError,
    lower_shapes,
    raise_shapes,
    vector_degree_weight,
)

__all__ = [
    "FunctionalFamily",
    "PairingMatrix",
    "DimRecord",
    "functional_family",
    "pairing_matrix_truncated",
    "dim_truncated",
    "dim_symbolic",
    "dim_record",
    "radical_membership",
    "gamma_grid",
]

SCHEMA_VERSION = 1


@dataclass
class FunctionalFamily:
    """Functionals f_key(beta) for one lowering shape and base index.

    ``key = (raise_shape, l, delta, a)`` names the gamma-term ``gamma^delta a^gamma``
    of the coefficient of ``v_l`` after applying a raising word of that shape.
    """

    lower_shape: tuple
    j: str
    functions: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.functions)

    def signatures(self) -> list:
        sigs = set()
        for f in self.functions.values():
            sigs.update(f.signatures())
        return sorted(sigs)

    def values(self, betas: Sequence[Sequence[int]]) -> dict:
        pt = tuple(c for b in betas for c in b)
        return {k: evaluate(f, pt) for k, f in self.functions.items()}


@dataclass
class PairingMatrix:
    rows: list
    cols: list
    entries: ExactMatrix

    def rank(self) -> int:
        return rank_of_rows(self.entries.entries, self.entries.cols) if self.rows and self.cols else 0


@dataclass
class DimRecord:
    algebra: str
    module: str
    degree: int
    weight: tuple
    ranks: dict = field(default_factory=dict)
    stabilized: bool = False
    symbolic_dim: int | None = None

    @property
    def value(self) -> int | None:
        return self.ranks[max(self.ranks)] if self.ranks else None

    @property
    def agrees(self) -> bool | None:
        if self.symbolic_dim is None or not self.ranks:
            return None
        return self.value == self.symbolic_dim

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "module": self.module,
            "degree": self.degree,
            "weight": list(self.weight),
            "ranks": {str(b): r for b, r in sorted(self.ranks.items())},
            "stabilized": self.stabilized,
            "truncated_dim": self.value,
            "symbolic_dim": self.symbolic_dim,
            "agrees": self.agrees,
        }


def _alpha(I: InducedModule, alpha) -> tuple[int, ...]:
    if not I.module.graded:
        return ()
    alpha = tuple(int(a) for a in alpha) if alpha is not None and len(alpha) else (0,) * I.n
    if len(alpha) != I.n:
        raise WeightError(f"weight {alpha} has wrong rank")
    return alpha


def functional_family(I: InducedModule, lower_shape, alpha=(), j: str | None = None) -> FunctionalFamily:
    """All f_key(beta) for ``lower_shape`` over base ``v_j`` at total weight ``alpha``."""
    lower_shape = tuple((int(a), b) for a, b in lower_shape)
    j = I.module.J[0] if j is None else j
    alpha = _alpha(I, alpha)
    i = sum(a for a, _ in lower_shape)
    fam = FunctionalFamily(lower_shape, j)
    for rs in raise_shapes(I.algebra, i):
        img = I.symbolic_reduce(lower_shape, rs, j)
        gvars = img.gamma_vars()
        for l, h in sorted(img.at_alpha(alpha).items()):
            for f, sig in expand_in_subset(h, gvars):
                fam.functions[(rs, l) + sig] = f
    return fam


def gamma_grid(I: InducedModule, raise_shape, lower: Sequence[tuple], alpha=()) -> list[tuple]:
    """gamma points (per letter) on which raising tests of ``raise_shape`` are conclusive.

    ``lower`` lists the (lower_shape, j) pairs whose images must be separated.
    """
    alpha = _alpha(I, alpha)
    sigs = set()
    r = len(raise_shape)
    for ls, j in lower:
        img = I.symbolic_reduce(ls, raise_shape, j)
        bvars = img.beta_vars()
        for h in img.at_alpha(alpha).values():
            for f, sig in expand_in_subset(h, bvars):
                sigs.add(sig)
    if not sigs:
        return []
    n = I.n
    out = []
    for pt in independence_grid(sorted(sigs)):
        out.append(tuple(tuple(pt[u * n:(u + 1) * n]) for u in range(r)))
    return out


def _box(n: int, B: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-B, B + 1), repeat=n))


def _lowering_rows(I: InducedModule, i: int, alpha, B: int) -> list[PBWWord]:
    rows = []
    pts = _box(I.n, B)
    for ls in lower_shapes(I.algebra, i):
        if len(ls) > I.depth:
            continue
        for betas in itertools.product(pts, repeat=len(ls)):
            for j in I.module.J:
                rows.append(I.monomial(ls, betas, j, alpha))
    return rows


def pairing_matrix_truncated(I: InducedModule, i: int, alpha=(), B_low: int = 2,
                             B_high: int | None = None) -> PairingMatrix:
    """Lowering monomials with beta in a box against raising tests with gamma in a box."""
    if B_low < 0 or (B_high is not None and B_high < 0):
        raise ValueError("boxes must be non-negative")
    B_high = B_low if B_high is None else B_high
    alpha = _alpha(I, alpha)
    rows = _lowering_rows(I, i, alpha, B_low)
    pts = _box(I.n, B_high)
    words = []
    for rs in raise_shapes(I.algebra, i):
        if len(rs) > I.depth:
            continue
        for gammas in itertools.product(pts, repeat=len(rs)):
            words.append(I.raising_word(rs, gammas))
    col_index: dict = {}
    data = []
    for x in rows:
        row: dict = {}
        for wi, word in enumerate(words):
            for (l, wt), c in I.apply_raising_word(word, {x: Scalar(1)}).items():
                key = (wi, l, wt)
                if key not in col_index:
                    col_index[key] = len(col_index)
                row[col_index[key]] = c
        data.append(row)
    ncols = len(col_index)
    entries = ExactMatrix([[r.get(c, ZERO) for c in range(ncols)] for r in data], cols=ncols)
    cols = sorted(col_index, key=col_index.get)
    return PairingMatrix(rows, cols, entries)


def dim_truncated(I: InducedModule, i: int, alpha=(), boxes: Sequence[int] = (1, 2, 3)) -> tuple[dict, bool, int]:
    """Ranks of the truncated pairing per box, stabilization flag and last rank."""
    boxes = [int(b) for b in boxes]
    if any(b <= a for a, b in zip(boxes, boxes[1:])) or not boxes:
        raise ValueError("box schedule must be strictly increasing")
    ranks = {B: pairing_matrix_truncated(I, i, alpha, B, B).rank() for B in boxes}
    stabilized = len(boxes) >= 2 and ranks[boxes[-1]] == ranks[boxes[-2]]
    return ranks, stabilized, ranks[boxes[-1]]


def dim_symbolic(I: InducedModule, i: int, alpha=()) -> int:
    """Exact dim M(V)^(-i)_alpha from the functional families."""
    alpha = _alpha(I, alpha)
    col_index: dict = {}
    rows = []
    for ls in lower_shapes(I.algebra, i):
        for j in I.module.J:
            fam = functional_family(I, ls, alpha, j)
            if not fam.d:
                continue
            keys = sorted(fam.functions)
            for k in keys:
                col_index.setdefault(k, len(col_index))
            for pt in independence_grid(fam.signatures()):
                row = {}
                for k in keys:
                    val = evaluate(fam.functions[k], pt)
                    if val:
                        row[col_index[k]] = val
                if row:
                    rows.append(row)
    ncols = len(col_index)
    if not rows:
        return 0
    return rank_of_rows([[r.get(c, ZERO) for c in range(ncols)] for r in rows], ncols)


def dim_record(I: InducedModule, i: int, alpha=(), boxes: Sequence[int] | None = (1, 2, 3),
               symbolic: bool = True) -> DimRecord:
    alpha = _alpha(I, alpha)
    rec = DimRecord(I.algebra.name, I.module.name, -i, alpha)
    if boxes:
        rec.ranks, rec.stabilized, _ = dim_truncated(I, i, alpha, boxes)
    if symbolic:
        rec.symbolic_dim = dim_symbolic(I, i, alpha)
    return rec


def radical_membership(I: InducedModule, x: Mapping[PBWWord, Scalar], mode: str = "symbolic", B: int = 3) -> bool:
    """Whether the homogeneous vector ``x`` lies in the radical.

    ``symbolic`` and ``grid`` are conclusive.  ``truncated`` only tries raising
    words with gamma in ``[-B, B]^n``, a necessary condition.
    """
    x = {w: c for w, c in x.items() if c}
    dw = vector_degree_weight(x)
    if dw is None:
        return True
    deg, weight = dw
    i = -deg
    if i == 0:
        return False
    if i < 0:
        raise DegreeError("vectors of positive degree do not occur")
    if mode == "symbolic":
        acc: dict = {}
        for w, c in x.items():
            fam = functional_family(I, w.shape, weight, w.j)
            for k, v in fam.values([g.alpha for g in w.letters]).items():
                acc[k] = acc.get(k, ZERO) + c * v
        return all(not v for v in acc.values())
    if mode == "grid":
        lower = sorted({(w.shape, w.j) for w in x})
        for rs in raise_shapes(I.algebra, i):
            for gammas in gamma_grid(I, rs, lower, weight):
                if I.apply_raising_word(I.raising_word(rs, gammas), x):
                    return False
        return True
    if mode == "truncated":
        pts = _box(I.n, B)
        for rs in raise_shapes(I.algebra, i):
            for gammas in itertools.product(pts, repeat=len(rs)):
                if I.apply_raising_word(I.raising_word(rs, gammas), x):
                    return False
        return True
    raise ValueError(f"unknown mode {mode!r}")
