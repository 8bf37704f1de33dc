"""The induced module U(G^-) (x) V with G^+ acting by zero on V.

Vectors are finite combinations of words ``x_1 x_2 ... x_s v_j(w)`` where every
letter has negative Z-degree.  Words are not normal ordered among
themselves; acting with a generator of non-negative degree moves it to the
right one letter at a time using ``g x w = [g, x] w + x (g w)``.

The same recursion runs symbolically: letters then carry integer-linear
lattice arguments over a block of symbolic variables and coefficients are
exp-polynomials in those variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .algebra import AlgebraSpec, Generator, lie_add
from .exactnum import ONE, Scalar
from .exppoly import ExpPoly, substitute_affine
from .gmodule import DegreeError, ModuleSpec

__all__ = [
    "PBWWord",
    "InducedModule",
    "DepthError",
    "WeightError",
    "SymbolicImage",
    "compositions",
    "lower_shapes",
    "raise_shapes",
    "vector_degree_weight",
]


class DepthError(ValueError):
    pass


class WeightError(ValueError):
    pass


class PBWWord(NamedTuple):
    """``letters[0] letters[1] ... letters[-1] v_j(base)``."""

    letters: tuple[Generator, ...]
    j: str
    base: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(g.i for g in self.letters)

    @property
    def weight(self) -> tuple[int, ...]:
        w = list(self.base)
        for g in self.letters:
            for t, a in enumerate(g.alpha):
                if w:
                    w[t] += a
        return tuple(w)

    @property
    def shape(self) -> tuple[tuple[int, str], ...]:
        return tuple((-g.i, g.family) for g in self.letters)

    def __str__(self):
        body = " ".join(str(g) for g in self.letters)
        vec = f"v_{self.j}({','.join(map(str, self.base))})"
        return f"{body} {vec}" if body else vec


# FormalVector: dict PBWWord -> Scalar
FormalVector = dict


def compositions(total: int) -> list[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to ``total``."""
    if total == 0:
        return [()]
    out = []
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            out.append((first,) + rest)
    return out


def lower_shapes(algebra: AlgebraSpec, i: int) -> list[tuple[tuple[int, str], ...]]:
    """All lowering shapes ((i_1, k_1), ...) with sum i_t = i and k_t in K_{-i_t}."""
    out = []
    for comp in compositions(i):
        for fams in itertools.product(*(algebra.families(-c) for c in comp)):
            out.append(tuple(zip(comp, fams)))
    return out


def raise_shapes(algebra: AlgebraSpec, i: int) -> list[tuple[tuple[int, str], ...]]:
    """All raising shapes ((j_1, m_1), ...) with sum j_u = i and m_u in K_{j_u}."""
    out = []
    for comp in compositions(i):
        for fams in itertools.product(*(algebra.families(c) for c in comp)):
            out.append(tuple(zip(comp, fams)))
    return out


def vector_degree_weight(x: Mapping[PBWWord, Scalar]) -> tuple[int, tuple[int, ...]] | None:
    """(degree, weight) of a homogeneous vector; None for zero; WeightError otherwise."""
    found = {(w.degree, w.weight) for w in x}
    if not found:
        return None
    if len(found) > 1:
        raise WeightError(f"vector is not homogeneous: {sorted(found)}")
    return found.pop()


# -- symbolic letters ---------------------------------------------------------

Form = tuple[tuple[int, ...], ...]  # n integer-linear forms over the symbolic variables


class SymGen(NamedTuple):
    family: str
    i: int
    arg: Form


class SymWord(NamedTuple):
    letters: tuple[SymGen, ...]
    j: str
    base: Form


def _form_add(a: Form, b: Form) -> Form:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


@dataclass(frozen=True)
class SymbolicImage:
    """h_l(beta, gamma, alpha) for each target basis index l.

    Variable layout: beta_1..beta_s, gamma_1..gamma_r, then alpha (graded kind
    only), each block ``n`` variables wide.
    """

    h: dict
    n: int
    s: int
    r: int
    graded: bool

    @property
    def nvars(self) -> int:
        return self.n * (self.s + self.r + (1 if self.graded else 0))

    def beta_vars(self) -> list[int]:
        return list(range(self.n * self.s))

    def gamma_vars(self) -> list[int]:
        return list(range(self.n * self.s, self.n * (self.s + self.r)))

    def alpha_vars(self) -> list[int]:
        return list(range(self.n * (self.s + self.r), self.nvars)) if self.graded else []

    def point(self, betas, gammas, alpha=()) -> tuple[int, ...]:
        pt = [c for b in betas for c in b] + [c for g in gammas for c in g]
        if self.graded:
            pt += list(alpha)
        return tuple(pt)

    def at_alpha(self, alpha: Sequence[int]) -> dict:
        """Specialise the alpha block, leaving functions of (beta, gamma)."""
        if not self.graded:
            return dict(self.h)
        m = self.n * (self.s + self.r)
        A = [[1 if c == r else 0 for c in range(m)] for r in range(m)] + [[0] * m for _ in range(self.n)]
        b = [0] * m + list(alpha)
        return {l: substitute_affine(f, A, b) for l, f in self.h.items()}


class InducedModule:
    """Concrete and symbolic action of G on the induced module of ``module``."""

    def __init__(self, module: ModuleSpec, depth: int = 3):
        self.module = module
        self.algebra = module.algebra
        self.depth = depth
        self._cache: dict[tuple[Generator, PBWWord], dict] = {}
        self._sym_cache: dict[tuple[SymGen, SymWord], dict] = {}
        self._reduce_cache: dict[tuple, SymbolicImage] = {}

    @property
    def n(self) -> int:
        return self.algebra.n

    # -- construction ---------------------------------------------------------
    def base_vector(self, j: str, weight: Sequence[int] = ()) -> FormalVector:
        return {PBWWord((), j, self._weight(weight)): ONE}

    def _weight(self, w: Sequence[int]) -> tuple[int, ...]:
        if not self.module.graded:
            return ()
        w = tuple(int(a) for a in w) if len(w) else (0,) * self.n
        if len(w) != self.n:
            raise WeightError(f"weight {w} has wrong rank")
        return w

    def monomial(self, shape: Sequence[tuple[int, str]], betas: Sequence[Sequence[int]], j: str,
                 alpha: Sequence[int] = ()) -> PBWWord:
        """The word g_{k_1}^(-i_1)(beta_1) ... v_j(alpha - sum beta) as a PBWWord."""
        if len(shape) != len(betas):
            raise WeightError("one lattice point per letter is required")
        if j not in self.module.J:
            raise ValueError(f"unknown basis index {j!r}")
        letters = []
        for (i_t, k_t), b in zip(shape, betas):
            if i_t < 1:
                raise DegreeError("lowering letters need i_t >= 1")
            if k_t not in self.algebra.families(-i_t):
                raise ValueError(f"{k_t!r} is not in K_{-i_t}")
            b = tuple(int(c) for c in b)
            if len(b) != self.n:
                raise WeightError(f"lattice point {b} has wrong rank")
            letters.append(Generator(k_t, -i_t, b))
        if self.module.graded:
            alpha = self._weight(alpha)
            base = tuple(a - sum(b[t] for b in betas) for t, a in enumerate(alpha))
        else:
            base = ()
        return PBWWord(tuple(letters), j, base)

    def monomial_vector(self, shape, betas, j, alpha=()) -> FormalVector:
        return {self.monomial(shape, betas, j, alpha): ONE}

    # -- concrete action ------------------------------------------------------
    def _apply_word(self, g: Generator, word: PBWWord) -> dict:
        key = (g, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if g.i < 0:
            out[PBWWord((g,) + word.letters, word.j, word.base)] = ONE
        elif not word.letters:
            if g.i == 0:
                for (s, w), c in self.module.act_basis(g, word.j, word.base).items():
                    out[PBWWord((), s, w)] = c
        else:
            x1 = word.letters[0]
            rest = PBWWord(word.letters[1:], word.j, word.base)
            for h, c in self.algebra.bracket(g, x1).items():
                for w, d in self._apply_word(h, rest).items():
                    lie_add(out, w, c * d)
            for w, d in self._apply_word(g, rest).items():
                lie_add(out, PBWWord((x1,) + w.letters, w.j, w.base), d)
        self._cache[key] = out
        return out

    def apply_generator(self, g: Generator, x: Mapping[PBWWord, Scalar]) -> FormalVector:
        out: FormalVector = {}
        for word, c in x.items():
            for w, d in self._apply_word(g, word).items():
                lie_add(out, w, c * d)
        return out

    def apply_element(self, X: Mapping[Generator, Scalar], x: Mapping[PBWWord, Scalar]) -> FormalVector:
        out: FormalVector = {}
        for g, c in X.items():
            for w, d in self.apply_generator(g, x).items():
                lie_add(out, w, c * d)
        return out

    def apply_word(self, letters: Sequence[Generator], x: Mapping[PBWWord, Scalar]) -> FormalVector:
        """Apply ``letters[0] letters[1] ... letters[-1]`` (rightmost acts first)."""
        for g in reversed(letters):
            x = self.apply_generator(g, x)
            if not x:
                break
        return x

    def apply_raising_word(self, letters: Sequence[Generator], x: Mapping[PBWWord, Scalar]) -> dict:
        """Apply a word of positive-degree letters landing in degree 0; returns a VectorInV."""
        if any(g.i < 1 for g in letters):
            raise DegreeError("raising words use letters of positive degree")
        dw = vector_degree_weight(x)
        if dw is not None and dw[0] + sum(g.i for g in letters) != 0:
            raise DegreeError(f"raising word of degree {sum(g.i for g in letters)} on a vector of degree {dw[0]}")
        y = self.apply_word(letters, x)
        out: dict = {}
        for w, c in y.items():
            if w.letters:
                raise DegreeError("raising word did not land in V")
            lie_add(out, (w.j, w.base), c)
        return out

    # -- symbolic action ------------------------------------------------------
    def _sym_bracket(self, x: SymGen, y: SymGen, nvars: int) -> list[tuple[SymGen, ExpPoly]]:
        out = []
        A = list(x.arg) + list(y.arg)
        arg = _form_add(x.arg, y.arg)
        for s, f in self.algebra.structure(x.family, x.i, y.family, y.i):
            c = substitute_affine(f, A)
            if c:
                out.append((SymGen(s, x.i + y.i, arg), c))
        return out

    def _sym_act(self, g: SymGen, word: SymWord, nvars: int) -> dict:
        A = list(g.arg) + (list(word.base) if self.module.graded else [])
        base = _form_add(g.arg, word.base) if self.module.graded else word.base
        out: dict = {}
        for s, h in self.module.action(g.family, word.j):
            c = substitute_affine(h, A)
            if c:
                lie_add(out, SymWord((), s, base), c)
        return out

    def _sym_apply_word(self, g: SymGen, word: SymWord, nvars: int) -> dict:
        key = (g, word)
        hit = self._sym_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if g.i < 0:
            out[SymWord((g,) + word.letters, word.j, word.base)] = ExpPoly.constant(ONE, nvars)
        elif not word.letters:
            if g.i == 0:
                out = self._sym_act(g, word, nvars)
        else:
            x1 = word.letters[0]
            rest = SymWord(word.letters[1:], word.j, word.base)
            for h, c in self._sym_bracket(g, x1, nvars):
                for w, d in self._sym_apply_word(h, rest, nvars).items():
                    lie_add(out, w, c * d)
            for w, d in self._sym_apply_word(g, rest, nvars).items():
                lie_add(out, SymWord((x1,) + w.letters, w.j, w.base), d)
        self._sym_cache[key] = out
        return out

    def symbolic_reduce(self, lower_shape: Sequence[tuple[int, str]], raise_shape: Sequence[tuple[int, str]],
                        j: str) -> SymbolicImage:
        """h_l(beta, gamma, alpha): raising word applied to the lowering word over v_j(alpha - sum beta)."""
        lower_shape = tuple((int(a), b) for a, b in lower_shape)
        raise_shape = tuple((int(a), b) for a, b in raise_shape)
        key = (lower_shape, raise_shape, j)
        hit = self._reduce_cache.get(key)
        if hit is not None:
            return hit
        if sum(a for a, _ in lower_shape) != sum(a for a, _ in raise_shape):
            raise DegreeError("raising and lowering shapes must have equal total degree")
        if len(lower_shape) > self.depth or len(raise_shape) > self.depth:
            raise DepthError(f"shape longer than depth cap {self.depth}")
        n, s, r = self.n, len(lower_shape), len(raise_shape)
        graded = self.module.graded
        nvars = n * (s + r + (1 if graded else 0))

        def block(idx: int) -> Form:
            return tuple(tuple(1 if c == idx * n + t else 0 for c in range(nvars)) for t in range(n))

        letters = []
        for t, (i_t, k_t) in enumerate(lower_shape):
            if k_t not in self.algebra.families(-i_t):
                raise ValueError(f"{k_t!r} is not in K_{-i_t}")
            letters.append(SymGen(k_t, -i_t, block(t)))
        if graded:
            base = block(s + r)
            for t in range(s):
                base = tuple(tuple(x - y for x, y in zip(rb, rt)) for rb, rt in zip(base, block(t)))
        else:
            base = tuple(() for _ in range(0))
        raising = []
        for u, (j_u, m_u) in enumerate(raise_shape):
            if m_u not in self.algebra.families(j_u):
                raise ValueError(f"{m_u!r} is not in K_{j_u}")
            raising.append(SymGen(m_u, j_u, block(s + u)))

        state = {SymWord(tuple(letters), j, base): ExpPoly.constant(ONE, nvars)}
        for g in reversed(raising):
            nxt: dict = {}
            for w, c in state.items():
                for w2, d in self._sym_apply_word(g, w, nvars).items():
                    lie_add(nxt, w2, c * d)
            state = nxt
            if not state:
                break
        h: dict[str, ExpPoly] = {}
        expected = None
        if graded:
            expected = block(s + r)
            for u in range(r):
                expected = _form_add(expected, block(s + u))
        for w, c in state.items():
            if w.letters:
                raise DegreeError("symbolic raising word did not land in V")
            if graded and w.base != expected:
                raise WeightError("symbolic weight bookkeeping mismatch")
            h[w.j] = h[w.j] + c if w.j in h else c
        image = SymbolicImage({l: f for l, f in h.items() if f}, n, s, r, graded)
        self._reduce_cache[key] = image
        return image

    def raising_word(self, raise_shape: Sequence[tuple[int, str]], gammas: Sequence[Sequence[int]]) -> list[Generator]:
        return [Generator(m, jj, tuple(int(c) for c in g)) for (jj, m), g in zip(raise_shape, gammas)]
