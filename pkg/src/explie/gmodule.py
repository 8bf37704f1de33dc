"""Exp-polynomial modules over the degree-zero part G^(0).

Graded kind:  g_k(alpha) v_j(beta) = sum_s h_{k,j}^s(alpha, beta) v_s(alpha + beta)
Finite kind:  g_k(alpha) v_j       = sum_s h_{k,j}^s(alpha) v_s
"""

from __future__ import annotations

import configparser
import itertools
import random
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .algebra import AlgebraSpec, AxiomReport, Generator, RegistryError, lie_add, registry_algebra
from .exactnum import ONE, P, Scalar, as_scalar
from .exppoly import ExpPoly, evaluate, parse_exppoly

__all__ = [
    "ModuleSpec",
    "DegreeError",
    "registry_module",
    "MODULE_NAMES",
    "check_compatibility",
    "parse_module_text",
    "sl2_irrep",
]


class DegreeError(ValueError):
    """A generator of the wrong Z-degree was used."""


ActionFn = Callable[[str, str], Sequence[tuple[str, ExpPoly]]]

# A vector of V is a dict (j, beta) -> Scalar; beta is () for the finite kind.
VectorInV = dict


class ModuleSpec:
    def __init__(self, name: str, algebra: AlgebraSpec, kind: str, J: Sequence[str], action: ActionFn,
                 params: Mapping | None = None):
        if kind not in ("graded", "finite"):
            raise ValueError(f"unknown module kind {kind!r}")
        self.name = name
        self.algebra = algebra
        self.kind = kind
        self.J = tuple(J)
        self.params = dict(params or {})
        self._action_fn = action
        self._table: dict[tuple[str, str], tuple[tuple[str, ExpPoly], ...]] = {}

    def __repr__(self):
        return f"ModuleSpec({self.name!r}, {self.kind}, |J|={len(self.J)})"

    @property
    def graded(self) -> bool:
        return self.kind == "graded"

    @property
    def arity(self) -> int:
        n = self.algebra.n
        return 2 * n if self.graded else n

    def zero_weight(self) -> tuple[int, ...]:
        return (0,) * self.algebra.n if self.graded else ()

    def action(self, k: str, j: str) -> tuple[tuple[str, ExpPoly], ...]:
        key = (k, j)
        out = self._table.get(key)
        if out is None:
            merged: dict[str, ExpPoly] = {}
            for s, h in self._action_fn(k, j):
                if s not in self.J:
                    raise RegistryError(f"{self.name}: action lands on unknown basis index {s!r}")
                if h.arity != self.arity:
                    raise RegistryError(f"{self.name}: action function has arity {h.arity}, expected {self.arity}")
                merged[s] = merged[s] + h if s in merged else h
            out = tuple((s, h) for s, h in merged.items() if h)
            self._table[key] = out
        return out

    def act_basis(self, g: Generator, j: str, beta: tuple[int, ...]) -> VectorInV:
        if g.i != 0:
            raise DegreeError(f"only G^(0) acts on V, got degree {g.i}")
        if self.graded:
            point = g.alpha + beta
            weight = tuple(a + b for a, b in zip(g.alpha, beta))
        else:
            point = g.alpha
            weight = ()
        out: VectorInV = {}
        for s, h in self.action(g.family, j):
            c = evaluate(h, point)
            if c:
                lie_add(out, (s, weight), c)
        return out

    def act(self, g: Generator, v: Mapping) -> VectorInV:
        out: VectorInV = {}
        for (j, beta), c in v.items():
            for key, d in self.act_basis(g, j, beta).items():
                lie_add(out, key, c * d)
        return out

    def act_element(self, X: Mapping[Generator, Scalar], v: Mapping) -> VectorInV:
        out: VectorInV = {}
        for g, c in X.items():
            for key, d in self.act(g, v).items():
                lie_add(out, key, c * d)
        return out


# -- finite-dimensional sl2 representations ----------------------------------


def sl2_irrep(dim: int) -> dict[str, dict[int, list[tuple[int, int]]]]:
    """Irreducible sl2 module of dimension ``dim`` on basis v_0..v_{dim-1} (v_0 highest)."""
    rep: dict[str, dict[int, list[tuple[int, int]]]] = {"e": {}, "f": {}, "h": {}}
    for k in range(dim):
        rep["h"][k] = [(k, dim - 1 - 2 * k)]
        rep["e"][k] = [(k - 1, k * (dim - k))] if k > 0 else []
        rep["f"][k] = [(k + 1, 1)] if k + 1 < dim else []
    return rep


_REP_DIMS = {"trivial": 1, "natural": 2, "adjoint": 3}


def _rep(name: str):
    if name in _REP_DIMS:
        return _REP_DIMS[name], sl2_irrep(_REP_DIMS[name])
    if name.startswith("dim"):
        d = int(name[3:])
        return d, sl2_irrep(d)
    raise RegistryError(f"unknown sl2 representation {name!r}")


def _q_factor(q: Sequence[Fraction], n: int, graded: bool) -> ExpPoly:
    """The function alpha -> q^alpha in the module's argument layout."""
    arity = 2 * n if graded else n
    bases = tuple(Fraction(x) for x in q) + (Fraction(1),) * (arity - n)
    return ExpPoly(arity, [(((0,) * arity, bases), ONE)])


def loop_module(algebra: AlgebraSpec, reps: Sequence[str] = ("natural",), qs: Sequence[Sequence] = ((2,),),
                graded: bool = True) -> ModuleSpec:
    """Tensor loop module: g(alpha) acts on factor p with weight q_p^alpha."""
    if not algebra.name.startswith("toroidal-sl2"):
        raise RegistryError("loop modules are defined over toroidal-sl2")
    n = algebra.n
    if len(reps) != len(qs):
        raise RegistryError("need one q vector per tensor factor")
    qs = [tuple(Fraction(x) for x in q) for q in qs]
    for q in qs:
        if len(q) != n or any(x == 0 for x in q):
            raise RegistryError(f"q vector {q} must have {n} nonzero entries")
    factors = [_rep(r) for r in reps]
    index_tuples = list(itertools.product(*(range(d) for d, _ in factors)))
    label = {t: ",".join(map(str, t)) for t in index_tuples}
    unlabel = {v: k for k, v in label.items()}
    qf = [_q_factor(q, n, graded) for q in qs]

    def action(k, j):
        t = unlabel[j]
        out = []
        for pos, (_, rep) in enumerate(factors):
            for s, c in rep[k][t[pos]]:
                new = t[:pos] + (s,) + t[pos + 1:]
                out.append((label[new], qf[pos].scale(c)))
        return out

    kind = "graded" if graded else "finite"
    name = "loop" if graded else "finite-loop"
    return ModuleSpec(name, algebra, kind, [label[t] for t in index_tuples], action,
                      params={"reps": list(reps), "q": [[str(x) for x in q] for q in qs]})


def vir_like_zero_module(algebra: AlgebraSpec, f: str = "2^n1") -> ModuleSpec:
    """L_(0,k) v_j = f(k) v_(j+k) over the Virasoro-like algebra."""
    if algebra.name != "virasoro-like":
        raise RegistryError("vir-like-zero needs the virasoro-like algebra")
    fk = parse_exppoly(f, ["n1"])
    h = ExpPoly(2, [(((k[0], 0), (a[0], Fraction(1))), c) for (k, a), c in fk.terms])
    return ModuleSpec("vir-like-zero", algebra, "graded", ["v"], lambda k, j: [("v", h)], params={"f": f})


def qt_graded_module(algebra: AlgebraSpec, f: str | None = None) -> ModuleSpec:
    """t^alpha . t^beta = f(alpha, beta) t^(alpha+beta) over the quantum torus zero part."""
    if algebra.name != "quantum-torus":
        raise RegistryError("qt-graded needs the quantum-torus algebra")
    n = algebra.n
    names = [f"a{t + 1}" for t in range(n)] + [f"b{t + 1}" for t in range(n)]
    f = f or "2^a1"
    h = parse_exppoly(f, names)
    return ModuleSpec("qt-graded", algebra, "graded", ["v"], lambda k, j: [("v", h)], params={"f": f})


def qt_point_module(algebra: AlgebraSpec, f: str | None = None) -> ModuleSpec:
    """One-dimensional t^alpha . 1 = f(alpha) 1."""
    if algebra.name != "quantum-torus":
        raise RegistryError("qt-point needs the quantum-torus algebra")
    n = algebra.n
    f = f or "2^n1"
    h = parse_exppoly(f, [f"n{t + 1}" for t in range(n)])
    return ModuleSpec("qt-point", algebra, "finite", ["1"], lambda k, j: [("1", h)], params={"f": f})


def vir_intermediate_module(algebra: AlgebraSpec, lam=Fraction(1, 2), mu=Fraction(1, 3)) -> ModuleSpec:
    """d_a v_b = (b + lam + a mu) v_(a+b) for a, b in Zp; a = alpha p, b = beta p."""
    if algebra.name != "gen-virasoro":
        raise RegistryError("vir-intermediate needs the gen-virasoro algebra")
    lam, mu = as_scalar(lam), as_scalar(mu)
    h = ExpPoly.constant(lam, 2) + ExpPoly.variable(1, 2).scale(P) + ExpPoly.variable(0, 2).scale(P * mu)
    return ModuleSpec("vir-intermediate", algebra, "graded", ["v"], lambda k, j: [("v", h)],
                      params={"lambda": str(lam), "mu": str(mu)})


def zero_module(algebra: AlgebraSpec, dim: int = 1, graded: bool = True) -> ModuleSpec:
    """G^(0) acts by zero."""
    J = [str(t) for t in range(dim)]
    return ModuleSpec("zero", algebra, "graded" if graded else "finite", J, lambda k, j: [],
                      params={"dim": dim})


MODULE_NAMES = (
    "loop-q2",
    "loop",
    "finite-loop",
    "vir-like-zero",
    "qt-graded",
    "qt-point",
    "vir-intermediate",
    "zero",
)

DEFAULT_ALGEBRA = {
    "loop-q2": "toroidal-sl2",
    "loop": "toroidal-sl2",
    "finite-loop": "toroidal-sl2",
    "vir-like-zero": "virasoro-like",
    "qt-graded": "quantum-torus",
    "qt-point": "quantum-torus",
    "vir-intermediate": "gen-virasoro",
    "zero": "gen-virasoro",
}


def _split_list(val, sep=";"):
    if isinstance(val, str):
        return [x.strip() for x in val.split(sep) if x.strip()]
    return list(val)


def registry_module(name: str, algebra: AlgebraSpec | None = None, **params) -> ModuleSpec:
    """Build a registered example module, over ``algebra`` or its default algebra."""
    key = name.replace("_", "-")
    if key not in MODULE_NAMES:
        raise RegistryError(f"unknown module {name!r}; known: {', '.join(MODULE_NAMES)}")
    if algebra is None:
        algebra = registry_algebra(DEFAULT_ALGEBRA[key])
    if key in ("loop-q2", "loop", "finite-loop"):
        reps = _split_list(params.get("reps", "natural"))
        default_q = ";".join(["2"] * len(reps)) if key != "loop-q2" else "2"
        qs = [[Fraction(x) for x in q.split(",")] for q in _split_list(params.get("q", default_q))]
        if key == "loop-q2" and (reps != ["natural"] or len(qs) != 1):
            raise RegistryError("loop-q2 is fixed to one natural factor with q=2")
        M = loop_module(algebra, reps, qs, graded=(key != "finite-loop"))
        M.name = key
        return M
    if key == "vir-like-zero":
        return vir_like_zero_module(algebra, params.get("f", "2^n1"))
    if key == "qt-graded":
        return qt_graded_module(algebra, params.get("f"))
    if key == "qt-point":
        return qt_point_module(algebra, params.get("f"))
    if key == "vir-intermediate":
        return vir_intermediate_module(algebra, params.get("lambda", params.get("lam", Fraction(1, 2))), params.get("mu", Fraction(1, 3)))
    return zero_module(algebra, int(params.get("dim", 1)), graded=str(params.get("kind", "graded")) == "graded")


# -- compatibility --------------------------------------------------------------


def check_compatibility(M: ModuleSpec, B: int = 3, samples: int | None = 200, seed: int = 0) -> AxiomReport:
    """Check g.(h.v) - h.(g.v) = [g, h].v on sampled degree-zero g, h and basis vectors v."""
    A = M.algebra
    gens = A.generators([0], B)
    if M.graded:
        pts = list(itertools.product(range(-B, B + 1), repeat=A.n))
    else:
        pts = [()]
    vecs = [(j, beta) for j in M.J for beta in pts]
    if samples is None and len(gens) ** 2 * len(vecs) <= 20_000:
        triples = list(itertools.product(gens, gens, vecs))
    else:
        rng = random.Random(seed)
        triples = [(rng.choice(gens), rng.choice(gens), rng.choice(vecs)) for _ in range(samples or 200)]
    report = AxiomReport()
    for g, h, (j, beta) in triples:
        report.checked += 1
        v = {(j, beta): ONE}
        res = dict(M.act(g, M.act(h, v)))
        for key, c in M.act(h, M.act(g, v)).items():
            lie_add(res, key, -c)
        for key, c in M.act_element(A.bracket(g, h), v).items():
            lie_add(res, key, -c)
        if res:
            report.violations.append({
                "g": str(g), "h": str(h), "v": f"{j}{list(beta)}",
                "residual": {f"{s}{list(w)}": str(c) for (s, w), c in sorted(res.items())},
            })
    return report


# -- definition files ---------------------------------------------------------


def parse_module_text(text: str, algebra: AlgebraSpec | None = None) -> ModuleSpec:
    """Module definition file mirroring the algebra format.

    ::

        [module]
        name = shifted
        kind = graded          # or finite
        algebra = gen-virasoro # registry name, unless an algebra is passed in
        J = v

        [action]
        d,v = v: 1/2 + p*b1 + p*a1/3

    Action functions use ``a1..an`` for the generator weight and, for the
    graded kind, ``b1..bn`` for the weight of the basis vector.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), delimiters=("=",))
    cp.optionxform = str
    cp.read_string(text)
    if not cp.has_section("module"):
        raise RegistryError("missing [module] section")
    if algebra is None:
        algebra = registry_algebra(cp.get("module", "algebra"))
    kind = cp.get("module", "kind", fallback="graded")
    J = cp.get("module", "J").split()
    n = algebra.n
    names = [f"a{t + 1}" for t in range(n)]
    if kind == "graded":
        names += [f"b{t + 1}" for t in range(n)]
    table: dict[tuple[str, str], list[tuple[str, ExpPoly]]] = {}
    if cp.has_section("action"):
        for key, val in cp.items("action"):
            k, _, j = key.partition(",")
            entries = []
            for part in val.split(";"):
                part = part.strip()
                if not part:
                    continue
                s, _, expr = part.partition(":")
                entries.append((s.strip(), parse_exppoly(expr.strip(), names)))
            table[(k.strip(), j.strip())] = entries
    name = cp.get("module", "name", fallback="custom")
    return ModuleSpec(name, algebra, kind, J, lambda k, j: table.get((k, j), []))
