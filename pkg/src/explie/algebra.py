"""Extragraded exp-polynomial Lie algebras.

An algebra is given by finite family sets ``K_i`` for each Z-degree ``i`` and
structure functions

    [g_k^(i)(alpha), g_m^(j)(beta)] = sum_s f_{k,m,i,j}^s(alpha, beta) g_s^(i+j)(alpha + beta)

with each ``f`` an :class:`ExpPoly` in the ``2n`` variables ``(alpha, beta)``.
"""

from __future__ import annotations

import configparser
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .exactnum import ONE, P, Scalar
from .exppoly import ExpPoly, evaluate, parse_exppoly, substitute_affine

__all__ = [
    "DegreeIndex",
    "Generator",
    "AlgebraSpec",
    "AxiomReport",
    "RegistryError",
    "registry_algebra",
    "ALGEBRA_NAMES",
    "check_axioms",
    "parse_algebra_text",
    "lie_add",
    "SL2",
]


class RegistryError(ValueError):
    pass


class DegreeIndex(NamedTuple):
    i: int
    alpha: tuple[int, ...]


class Generator(NamedTuple):
    """Distinguished spanning element ``g_family^(i)(alpha)``."""

    family: str
    i: int
    alpha: tuple[int, ...]

    @property
    def degree(self) -> DegreeIndex:
        return DegreeIndex(self.i, self.alpha)

    def __str__(self):
        return f"{self.family}^({self.i})({','.join(map(str, self.alpha))})"


# A Lie algebra element is a plain dict Generator -> Scalar without zeros.
LieElement = dict


def lie_add(acc: dict, key, c) -> None:
    """acc[key] += c, dropping the entry when it cancels."""
    if not c:
        return
    if key in acc:
        v = acc[key] + c
        if v:
            acc[key] = v
        else:
            del acc[key]
    else:
        acc[key] = c


StructureFn = Callable[[str, int, str, int], Sequence[tuple[str, ExpPoly]]]


class AlgebraSpec:
    """An extragraded exp-polynomial Lie algebra of lattice rank ``n``."""

    def __init__(
        self,
        name: str,
        n: int,
        families: Callable[[int], Sequence[str]],
        structure: StructureFn,
        depth: int = 3,
        params: Mapping | None = None,
    ):
        self.name = name
        self.n = n
        self.depth = depth
        self.params = dict(params or {})
        self._families_fn = families
        self._structure_fn = structure
        self._families: dict[int, tuple[str, ...]] = {}
        self._structure: dict[tuple, tuple[tuple[str, ExpPoly], ...]] = {}

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, n={self.n})"

    def families(self, i: int) -> tuple[str, ...]:
        fam = self._families.get(i)
        if fam is None:
            fam = tuple(self._families_fn(i))
            self._families[i] = fam
        return fam

    def structure(self, k: str, i: int, m: str, j: int) -> tuple[tuple[str, ExpPoly], ...]:
        key = (k, i, m, j)
        out = self._structure.get(key)
        if out is None:
            raw = self._structure_fn(k, i, m, j)
            target = set(self.families(i + j))
            merged: dict[str, ExpPoly] = {}
            for s, f in raw:
                if s not in target:
                    raise RegistryError(f"{self.name}: bracket lands outside K_{i + j}: {s}")
                if f.arity != 2 * self.n:
                    raise RegistryError(f"{self.name}: structure function of arity {f.arity}")
                merged[s] = merged[s] + f if s in merged else f
            out = tuple((s, f) for s, f in merged.items() if f)
            self._structure[key] = out
        return out

    def generator(self, family: str, i: int, alpha: Sequence[int]) -> Generator:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.n:
            raise ValueError(f"lattice weight {alpha} has wrong rank for n={self.n}")
        if family not in self.families(i):
            raise ValueError(f"{family!r} is not in K_{i} of {self.name}")
        return Generator(family, i, alpha)

    def bracket(self, x: Generator, y: Generator) -> LieElement:
        point = x.alpha + y.alpha
        weight = tuple(a + b for a, b in zip(x.alpha, y.alpha))
        out: LieElement = {}
        for s, f in self.structure(x.family, x.i, y.family, y.i):
            c = evaluate(f, point)
            if c:
                lie_add(out, Generator(s, x.i + y.i, weight), c)
        return out

    def bracket_elements(self, X: Mapping[Generator, Scalar], Y: Mapping[Generator, Scalar]) -> LieElement:
        out: LieElement = {}
        for x, cx in X.items():
            for y, cy in Y.items():
                for z, c in self.bracket(x, y).items():
                    lie_add(out, z, cx * cy * c)
        return out

    def generators(self, degrees: Iterable[int], box: int) -> list[Generator]:
        """All generators with Z-degree in ``degrees`` and coordinates in [-box, box]."""
        out = []
        pts = list(itertools.product(range(-box, box + 1), repeat=self.n))
        for i in degrees:
            for fam in self.families(i):
                for a in pts:
                    out.append(Generator(fam, i, a))
        return out


# -- registry -----------------------------------------------------------------

SL2 = {
    ("e", "f"): {"h": 1},
    ("f", "e"): {"h": -1},
    ("h", "e"): {"e": 2},
    ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2},
    ("f", "h"): {"f": 2},
}
SL2_BASIS = ("e", "f", "h")


def finite_lie(name: str, dim: int = 1) -> tuple[tuple[str, ...], dict]:
    """Basis and structure constants of a built-in finite-dimensional Lie algebra."""
    if name == "sl2":
        return SL2_BASIS, SL2
    if name == "abelian":
        return tuple(f"x{t + 1}" for t in range(dim)), {}
    raise RegistryError(f"unknown finite-dimensional Lie algebra {name!r}")


def toroidal(g: str = "sl2", n: int = 1, dim: int = 1, constants: Mapping | None = None,
             basis: Sequence[str] | None = None) -> AlgebraSpec:
    """R_{n+1} (x) g graded by the degree in t_0 and the degrees in t_1..t_n."""
    if constants is None:
        basis, constants = finite_lie(g, dim)
    basis = tuple(basis)

    def structure(k, i, m, j):
        return [(s, ExpPoly.constant(c, 2 * n)) for s, c in constants.get((k, m), {}).items()]

    return AlgebraSpec(f"toroidal-{g}", n, lambda i: basis, structure, params={"g": g, "n": n})


def witt(n: int = 1) -> AlgebraSpec:
    """W_{n+1} = Der C[t_0^+-, ..., t_n^+-]; family ``d0`` is t_0 d/dt_0, ``dk`` is t_k d/dt_k."""
    fams = tuple(f"d{k}" for k in range(n + 1))
    N = 2 * n

    def coord(which: int, r: int, deg: int) -> ExpPoly:
        # r-th exponent of the first (which=0) or second argument; r=0 is the t_0 degree
        if r == 0:
            return ExpPoly.constant(deg, N)
        return ExpPoly.variable(which * n + r - 1, N)

    def structure(k, i, m, j):
        # [x^A d_a, x^B d_b] = x^(A+B) (B_a d_b - A_b d_a)
        a, b = int(k[1:]), int(m[1:])
        out = [(m, coord(1, a, j))]
        out.append((k, -coord(0, b, i)))
        return out

    return AlgebraSpec("witt", n, lambda i: fams, structure, params={"n": n})


def quantum_torus(q: Sequence = (2,)) -> AlgebraSpec:
    """Lie algebra of the quantum torus t_j t_0 = q_j t_0 t_j, family ``t`` in every degree."""
    q = tuple(Fraction(x) for x in q)
    if any(x == 0 for x in q):
        raise RegistryError("quantum torus parameters must be nonzero")
    n = len(q)
    one = Fraction(1)

    def structure(k, i, m, j):
        # (q^(j alpha) - q^(i beta))
        first = ExpPoly(2 * n, [(((0,) * (2 * n), tuple(x**j for x in q) + (one,) * n), ONE)])
        second = ExpPoly(2 * n, [(((0,) * (2 * n), (one,) * n + tuple(x**i for x in q)), ONE)])
        return [("t", first - second)]

    return AlgebraSpec("quantum-torus", n, lambda i: ("t",), structure, params={"q": [str(x) for x in q]})


def virasoro_like() -> AlgebraSpec:
    """Basis L_(i,k); [L_x, L_y] = (y1 x2 - y2 x1) L_(x+y); degree i, lattice weight k."""

    def structure(k, i, m, j):
        # x = (i, alpha), y = (j, beta): j*alpha - beta*i
        f = ExpPoly.variable(0, 2).scale(j) - ExpPoly.variable(1, 2).scale(i)
        return [("L", f)]

    return AlgebraSpec("virasoro-like", 1, lambda i: ("L",), structure)


def generalized_virasoro() -> AlgebraSpec:
    """Centerless Vir[Z + Zp]: d_(i + alpha p) has degree i and lattice weight alpha."""

    def structure(k, i, m, j):
        # (y - x) with x = i + alpha p, y = j + beta p
        f = ExpPoly.constant(j - i, 2) + ExpPoly.variable(1, 2).scale(P) - ExpPoly.variable(0, 2).scale(P)
        return [("d", f)]

    return AlgebraSpec("gen-virasoro", 1, lambda i: ("d",), structure)


ALGEBRA_NAMES = (
    "toroidal-sl2",
    "toroidal-abelian",
    "witt",
    "quantum-torus",
    "virasoro-like",
    "gen-virasoro",
)


def registry_algebra(name: str, **params) -> AlgebraSpec:
    """Build one of the registered example algebras by name."""
    key = name.replace("_", "-")
    if key in ("toroidal-sl2", "toroidal"):
        return toroidal("sl2", n=int(params.get("n", 1)))
    if key == "toroidal-abelian":
        return toroidal("abelian", n=int(params.get("n", 1)), dim=int(params.get("dim", 1)))
    if key == "witt":
        return witt(int(params.get("n", 1)))
    if key == "quantum-torus":
        q = params.get("q", (2,))
        if isinstance(q, (str, int, Fraction)):
            q = [Fraction(x) for x in str(q).split(",")]
        return quantum_torus(q)
    if key == "virasoro-like":
        return virasoro_like()
    if key in ("gen-virasoro", "generalized-virasoro"):
        return generalized_virasoro()
    raise RegistryError(f"unknown algebra {name!r}; known: {', '.join(ALGEBRA_NAMES)}")


# -- axiom checks -------------------------------------------------------------


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked": self.checked, "ok": self.ok, "violations": self.violations[:20]}


def _elem_json(x: Mapping[Generator, Scalar]) -> dict:
    return {str(g): str(c) for g, c in sorted(x.items())}


def sample_triples(pool: Sequence, samples: int | None, seed: int, exhaustive_limit: int = 20_000):
    if samples is None and len(pool) ** 3 <= exhaustive_limit:
        return list(itertools.product(pool, repeat=3))
    rng = random.Random(seed)
    count = samples or 200
    return [(rng.choice(pool), rng.choice(pool), rng.choice(pool)) for _ in range(count)]


def check_axioms(A: AlgebraSpec, D: int = 3, B: int = 3, samples: int | None = 200, seed: int = 0) -> AxiomReport:
    """Antisymmetry and Jacobi on generator triples with |i| <= D and coordinates in [-B, B].

    ``samples=None`` enumerates all triples when that is small enough.
    """
    pool = A.generators(range(-D, D + 1), B)
    report = AxiomReport()
    for x, y, z in sample_triples(pool, samples, seed):
        report.checked += 1
        for u, v in ((x, y), (x, x)):
            anti: LieElement = dict(A.bracket(u, v))
            for g, c in A.bracket(v, u).items():
                lie_add(anti, g, c)
            if anti:
                report.violations.append(
                    {"axiom": "antisymmetry", "x": str(u), "y": str(v), "residual": _elem_json(anti)}
                )
        jac: LieElement = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for g, coef in A.bracket_elements(A.bracket(a, b), {c: ONE}).items():
                lie_add(jac, g, coef)
        if jac:
            report.violations.append(
                {"axiom": "jacobi", "x": str(x), "y": str(y), "z": str(z), "residual": _elem_json(jac)}
            )
    return report


# -- definition files ---------------------------------------------------------


def _lattice_names(n: int) -> list[str]:
    return [f"a{t + 1}" for t in range(n)] + [f"b{t + 1}" for t in range(n)]


def _swap_args(f: ExpPoly, n: int) -> ExpPoly:
    A = [[1 if c == (r + n) % (2 * n) else 0 for c in range(2 * n)] for r in range(2 * n)]
    return substitute_affine(f, A)


def _parse_targets(text: str) -> list[tuple[str, str]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        s, _, expr = part.partition(":")
        if not expr:
            raise RegistryError(f"bad bracket target {part!r}; expected 'family: expression'")
        out.append((s.strip(), expr.strip()))
    return out


def parse_algebra_text(text: str) -> AlgebraSpec:
    """Algebra definition file.

    ::

        [algebra]
        name = my-toroidal
        n = 1
        depth = 3

        [families]
        * = e f h          # every degree, or one line per degree

        [bracket]
        e,f = h: 1
        h,e = e: 2

    Structure functions use ``a1..an`` (first argument), ``b1..bn`` (second)
    and may mention the degrees ``i`` and ``j``.  The reversed bracket is
    filled in by antisymmetry.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), delimiters=("=",))
    cp.optionxform = str
    cp.read_string(text)
    if not cp.has_section("algebra"):
        raise RegistryError("missing [algebra] section")
    name = cp.get("algebra", "name", fallback="custom")
    n = cp.getint("algebra", "n")
    depth = cp.getint("algebra", "depth", fallback=3)
    fam_table = {key: tuple(val.split()) for key, val in cp.items("families")} if cp.has_section("families") else {}

    def families(i):
        if str(i) in fam_table:
            return fam_table[str(i)]
        return fam_table.get("*", ())

    rules: dict[tuple[str, str], list[tuple[str, str]]] = {}
    if cp.has_section("bracket"):
        for key, val in cp.items("bracket"):
            k, _, m = key.partition(",")
            rules[(k.strip(), m.strip())] = _parse_targets(val)
    names = _lattice_names(n)

    def structure(k, i, m, j):
        if (k, m) in rules:
            return [(s, parse_exppoly(e, names, {"i": i, "j": j})) for s, e in rules[(k, m)]]
        if (m, k) in rules:
            return [(s, -_swap_args(parse_exppoly(e, names, {"i": j, "j": i}), n)) for s, e in rules[(m, k)]]
        return []

    return AlgebraSpec(name, n, families, structure, depth=depth)
