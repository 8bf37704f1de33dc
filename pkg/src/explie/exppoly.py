"""Exp-polynomial functions on Z^r.

An exp-polynomial is a finite sum of terms

    c * n_1^k_1 ... n_r^k_r * a_1^n_1 ... a_r^n_r

with exponents ``k_j >= 0``, nonzero rational bases ``a_j`` and coefficients
``c`` in Q(p).  The canonical form is a tuple of ``((k, a), c)`` pairs sorted
lexicographically by ``(k, a)`` with no zero coefficients.
"""

from __future__ import annotations

import ast
import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactnum import ONE, P, ZERO, ExactMatrix, Scalar, as_scalar, mat_det

__all__ = [
    "ExpPoly",
    "ExpPolyError",
    "InvalidBaseError",
    "ArityError",
    "DuplicateSignatureError",
    "normalize",
    "combine",
    "evaluate",
    "substitute_affine",
    "expand_in_subset",
    "recombine",
    "independence_grid",
    "grid_matrix",
    "parse_exppoly",
]

Key = tuple[tuple[int, ...], tuple[Fraction, ...]]


class ExpPolyError(ValueError):
    pass


class InvalidBaseError(ExpPolyError):
    pass


class ArityError(ExpPolyError):
    pass


class DuplicateSignatureError(ExpPolyError):
    pass


def _check_key(key: Key, arity: int) -> Key:
    k, a = key
    k = tuple(int(e) for e in k)
    a = tuple(Fraction(b) for b in a)
    if len(k) != arity or len(a) != arity:
        raise ArityError(f"term key {key} does not have arity {arity}")
    if any(e < 0 for e in k):
        raise ExpPolyError(f"negative exponent in {key}")
    if any(b == 0 for b in a):
        raise InvalidBaseError(f"zero base in {key}")
    return k, a


class ExpPoly:
    """Immutable exp-polynomial in ``arity`` integer variables."""

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Iterable[tuple[Key, Scalar]] = ()):
        self.arity = arity
        acc: dict[Key, Scalar] = {}
        for key, c in terms:
            key = _check_key(key, arity)
            c = as_scalar(c)
            acc[key] = acc[key] + c if key in acc else c
        self.terms = tuple(sorted((kv for kv in acc.items() if kv[1]), key=lambda kv: kv[0]))
        self._hash = None

    @classmethod
    def _from_dict(cls, arity: int, acc: dict[Key, Scalar]) -> "ExpPoly":
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = tuple(sorted((kv for kv in acc.items() if kv[1]), key=lambda kv: kv[0]))
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "ExpPoly":
        return cls._from_dict(arity, {})

    @classmethod
    def constant(cls, c, arity: int) -> "ExpPoly":
        key = ((0,) * arity, (Fraction(1),) * arity)
        return cls._from_dict(arity, {key: as_scalar(c)})

    @classmethod
    def variable(cls, j: int, arity: int) -> "ExpPoly":
        k = tuple(1 if i == j else 0 for i in range(arity))
        return cls._from_dict(arity, {(k, (Fraction(1),) * arity): ONE})

    @classmethod
    def exponential(cls, base, j: int, arity: int) -> "ExpPoly":
        base = Fraction(base)
        if base == 0:
            raise InvalidBaseError("zero base")
        a = tuple(base if i == j else Fraction(1) for i in range(arity))
        return cls._from_dict(arity, {((0,) * arity, a): ONE})

    @classmethod
    def monomial(cls, k: Sequence[int], a: Sequence, c=1) -> "ExpPoly":
        return cls(len(k), [((tuple(k), tuple(a)), c)])

    # -- basic protocol -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == ExpPoly.constant(other, self.arity)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, self.terms))
        return self._hash

    def __repr__(self):
        return f"ExpPoly({self.arity}, {to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def signatures(self) -> list[Key]:
        return [key for key, _ in self.terms]

    def constant_value(self) -> Scalar | None:
        """The value if this is a constant function, else None."""
        if not self.terms:
            return ZERO
        if len(self.terms) == 1:
            (k, a), c = self.terms[0]
            if not any(k) and all(b == 1 for b in a):
                return c
        return None

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            if other.arity != self.arity:
                raise ArityError(f"arity {self.arity} vs {other.arity}")
            return other
        return ExpPoly.constant(as_scalar(other), self.arity)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        for key, c in other.terms:
            acc[key] = acc[key] + c if key in acc else c
        return ExpPoly._from_dict(self.arity, acc)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._from_dict(self.arity, {k: -c for k, c in self.terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "ExpPoly":
        c = as_scalar(c)
        if not c:
            return ExpPoly.zero(self.arity)
        return ExpPoly._from_dict(self.arity, {k: v * c for k, v in self.terms})

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return self.scale(other)
        other = self._coerce(other)
        acc: dict[Key, Scalar] = {}
        for (k1, a1), c1 in self.terms:
            for (k2, a2), c2 in other.terms:
                key = (
                    tuple(x + y for x, y in zip(k1, k2)),
                    tuple(x * y for x, y in zip(a1, a2)),
                )
                c = c1 * c2
                acc[key] = acc[key] + c if key in acc else c
        return ExpPoly._from_dict(self.arity, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = ExpPoly.constant(ONE, self.arity)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, *x):
        return evaluate(self, x[0] if len(x) == 1 and isinstance(x[0], (tuple, list)) else x)


def normalize(raw: Iterable[tuple[Key, object]], arity: int | None = None) -> ExpPoly:
    """Merge a raw term list into canonical form."""
    raw = list(raw)
    if arity is None:
        if not raw:
            raise ArityError("cannot infer arity of an empty term list")
        arity = len(raw[0][0][0])
    return ExpPoly(arity, raw)


def combine(op: str, f: ExpPoly, g) -> ExpPoly:
    """``op`` is one of ``add``, ``mul``, ``scale``."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


def _int_pow(base: Fraction, e: int) -> Fraction:
    return base**e


def evaluate(f: ExpPoly, x: Sequence[int]) -> Scalar:
    """Exact value of ``f`` at the integer point ``x`` (negative coordinates allowed)."""
    if len(x) != f.arity:
        raise ArityError(f"point of length {len(x)} for arity {f.arity}")
    total = ZERO
    for (k, a), c in f.terms:
        v = Fraction(1)
        for xj, kj, aj in zip(x, k, a):
            if kj:
                v *= xj**kj
                if not v:
                    break
            if aj != 1:
                v *= _int_pow(aj, xj)
        if v:
            total = total + c * v
    return total


# -- affine substitution ------------------------------------------------------


def _linear_power(form: tuple[tuple[int, ...], int], k: int) -> dict[tuple[int, ...], int]:
    """Expand (c . y + b)^k into {exponent vector: integer coefficient}."""
    coeffs, b = form
    nvars = len(coeffs)
    poly = {(0,) * nvars: 1}
    if k == 0:
        return poly
    lin = {}
    if b:
        lin[(0,) * nvars] = b
    for i, c in enumerate(coeffs):
        if c:
            lin[tuple(1 if t == i else 0 for t in range(nvars))] = c
    for _ in range(k):
        nxt: dict[tuple[int, ...], int] = {}
        for e1, c1 in poly.items():
            for e2, c2 in lin.items():
                e = tuple(s + t for s, t in zip(e1, e2))
                nxt[e] = nxt.get(e, 0) + c1 * c2
        poly = {e: c for e, c in nxt.items() if c}
    return poly


@lru_cache(maxsize=200_000)
def _substitute_cached(f: ExpPoly, A: tuple[tuple[int, ...], ...], b: tuple[int, ...]) -> ExpPoly:
    r = f.arity
    r2 = len(A[0]) if A else 0
    forms = [(A[j], b[j]) for j in range(r)]
    acc: dict[Key, Scalar] = {}
    for (k, a), c in f.terms:
        const = Fraction(1)
        bases = [Fraction(1)] * r2
        poly = {(0,) * r2: 1}
        for j in range(r):
            if a[j] != 1:
                const *= a[j] ** b[j]
                for l in range(r2):
                    if A[j][l]:
                        bases[l] *= a[j] ** A[j][l]
            if k[j]:
                lp = _linear_power(forms[j], k[j])
                nxt: dict[tuple[int, ...], int] = {}
                for e1, c1 in poly.items():
                    for e2, c2 in lp.items():
                        e = tuple(s + t for s, t in zip(e1, e2))
                        nxt[e] = nxt.get(e, 0) + c1 * c2
                poly = {e: v for e, v in nxt.items() if v}
        bases_t = tuple(bases)
        for e, pc in poly.items():
            key = (e, bases_t)
            val = c * (const * pc)
            acc[key] = acc[key] + val if key in acc else val
    return ExpPoly._from_dict(r2, acc)


def substitute_affine(f: ExpPoly, A: Sequence[Sequence[int]], b: Sequence[int] | None = None) -> ExpPoly:
    """Return ``y -> f(A y + b)`` where ``A`` has ``f.arity`` rows."""
    A = tuple(tuple(int(v) for v in row) for row in A)
    if len(A) != f.arity:
        raise ArityError(f"substitution matrix has {len(A)} rows, expected {f.arity}")
    widths = {len(row) for row in A}
    if len(widths) > 1:
        raise ArityError("ragged substitution matrix")
    b = tuple(int(v) for v in b) if b is not None else (0,) * f.arity
    if len(b) != f.arity:
        raise ArityError("offset vector length mismatch")
    if not A:
        # arity 0: f is a constant
        return ExpPoly(0, f.terms)
    return _substitute_cached(f, A, b)


# -- splitting over a variable subset -----------------------------------------


def expand_in_subset(h: ExpPoly, S: Sequence[int]) -> list[tuple[ExpPoly, tuple[tuple[int, ...], tuple[Fraction, ...]]]]:
    """Group ``h`` by its dependence on the variables in ``S``.

    Returns pairs ``(f_p, (delta_p, a_p))`` with ``h = sum_p f_p * prod_{v in S} v^delta a^v``,
    each ``f_p`` over the complementary variables (original order kept).
    """
    S = list(S)
    if any(not 0 <= v < h.arity for v in S) or len(set(S)) != len(S):
        raise ArityError(f"bad variable subset {S} for arity {h.arity}")
    rest = [v for v in range(h.arity) if v not in set(S)]
    groups: dict[tuple, dict[Key, Scalar]] = {}
    for (k, a), c in h.terms:
        sig = (tuple(k[v] for v in S), tuple(a[v] for v in S))
        rkey = (tuple(k[v] for v in rest), tuple(a[v] for v in rest))
        bucket = groups.setdefault(sig, {})
        bucket[rkey] = bucket[rkey] + c if rkey in bucket else c
    out = []
    for sig in sorted(groups):
        f = ExpPoly._from_dict(len(rest), groups[sig])
        if f:
            out.append((f, sig))
    return out


def recombine(pairs, S: Sequence[int], arity: int) -> ExpPoly:
    """Inverse of :func:`expand_in_subset`."""
    S = list(S)
    rest = [v for v in range(arity) if v not in set(S)]
    acc: dict[Key, Scalar] = {}
    for f, (delta, base) in pairs:
        for (k, a), c in f.terms:
            kk = [0] * arity
            aa = [Fraction(1)] * arity
            for v, e, bb in zip(rest, k, a):
                kk[v], aa[v] = e, bb
            for v, e, bb in zip(S, delta, base):
                kk[v], aa[v] = e, bb
            key = (tuple(kk), tuple(aa))
            acc[key] = acc[key] + c if key in acc else c
    return ExpPoly._from_dict(arity, acc)


# -- independence grids -------------------------------------------------------


def independence_grid(signatures: Sequence[tuple[Sequence[int], Sequence]]) -> list[tuple[int, ...]]:
    """Tensor grid on which the signature functions have independent value vectors.

    Per variable, every base ``a`` is completed to the confluent block
    ``a^n, n a^n, ..., n^K a^n`` (``K`` the largest power seen with that base)
    and the grid coordinate runs over ``0 .. s_v - 1`` with ``s_v`` the block
    total.  The evaluation matrix of the completed blocks is a Kronecker product
    of nonsingular extended Vandermonde matrices, so the given functions have
    full column rank on the grid; it is square when the signatures already
    form complete blocks.
    """
    sigs = [(tuple(int(e) for e in d), tuple(Fraction(x) for x in a)) for d, a in signatures]
    if len(set(sigs)) != len(sigs):
        raise DuplicateSignatureError("duplicate term signatures")
    if not sigs:
        return [()]
    nv = len(sigs[0][0])
    for d, a in sigs:
        if len(d) != nv or len(a) != nv:
            raise ArityError("signatures of mixed arity")
        if any(x == 0 for x in a):
            raise InvalidBaseError("zero base in signature")
    sizes = []
    for v in range(nv):
        top: dict[Fraction, int] = {}
        for d, a in sigs:
            top[a[v]] = max(top.get(a[v], 0), d[v])
        sizes.append(sum(k + 1 for k in top.values()))
    return list(itertools.product(*(range(s) for s in sizes)))


def grid_matrix(signatures, grid) -> ExactMatrix:
    """Evaluation matrix: one row per grid point, one column per signature."""
    cols = []
    for d, a in signatures:
        f = ExpPoly.monomial(d, a)
        cols.append([evaluate(f, pt) for pt in grid])
    return ExactMatrix([list(r) for r in zip(*cols)], cols=len(cols)) if cols else ExactMatrix([[] for _ in grid])


def grid_is_nonsingular(signatures, grid) -> bool:
    m = grid_matrix(signatures, grid)
    if m.rows == m.cols:
        return bool(mat_det(m))
    from .exactnum import mat_rank

    return mat_rank(m) == m.cols


# -- text form ----------------------------------------------------------------


def default_names(arity: int) -> list[str]:
    return [f"n{j + 1}" for j in range(arity)]


def _coef_text(c: Scalar) -> str:
    s = str(c)
    if c.is_rational() and c.to_fraction().denominator == 1:
        return s
    return f"({s})"


def to_text(f: ExpPoly, names: Sequence[str] | None = None) -> str:
    names = list(names) if names is not None else default_names(f.arity)
    if not f.terms:
        return "0"
    parts = []
    for (k, a), c in f.terms:
        factors = []
        for name, e, b in zip(names, k, a):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        for name, b in zip(names, a):
            if b != 1:
                bt = str(b) if b.denominator == 1 and b > 0 else f"({b})"
                factors.append(f"{bt}^{name}")
        if not factors:
            parts.append(_coef_text(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(_coef_text(c) + "*" + "*".join(factors))
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def parse_exppoly(text: str, names: Sequence[str], env: dict | None = None) -> ExpPoly:
    """Parse e.g. ``"3*n1^2*2^n1 + (1+p)*n2"`` over the variable ``names``.

    Exponents that are integer-linear in the variables produce exponential
    factors, so ``2^(i*a1)`` works when ``i`` is bound in ``env``.
    """
    names = list(names)
    arity = len(names)
    consts = {"p": P}
    if env:
        consts.update({k: as_scalar(v) for k, v in env.items()})
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpPolyError(f"bad exp-polynomial {text!r}") from exc

    def ev(node) -> ExpPoly:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return ExpPoly.constant(node.value, arity)
        if isinstance(node, ast.Name):
            if node.id in names:
                return ExpPoly.variable(names.index(node.id), arity)
            if node.id in consts:
                return ExpPoly.constant(consts[node.id], arity)
            raise ExpPolyError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                c = right.constant_value()
                if c is None or not c:
                    raise ExpPolyError(f"division by a non-constant or zero in {text!r}")
                return left.scale(c.inverse())
            if isinstance(node.op, ast.Pow):
                return _power(left, right)
        raise ExpPolyError(f"unsupported syntax in {text!r}")

    def _power(base: ExpPoly, exp: ExpPoly) -> ExpPoly:
        e = exp.constant_value()
        if e is not None:
            if not e.is_rational() or e.to_fraction().denominator != 1 or e.to_fraction() < 0:
                raise ExpPolyError(f"bad exponent in {text!r}")
            return base ** int(e.to_fraction())
        b = base.constant_value()
        if b is None or not b.is_rational() or not b:
            raise ExpPolyError(f"exponential base must be a nonzero rational in {text!r}")
        b = b.to_fraction()
        # exponent must be an integer-linear form in the variables
        A = [0] * arity
        shift = 0
        for (k, a), c in exp.terms:
            if any(x != 1 for x in a) or sum(k) > 1 or not c.is_rational() or c.to_fraction().denominator != 1:
                raise ExpPolyError(f"exponent must be integer-linear in {text!r}")
            if sum(k) == 0:
                shift = int(c.to_fraction())
            else:
                A[k.index(1)] = int(c.to_fraction())
        bases = tuple(b ** A[v] for v in range(arity))
        return ExpPoly(arity, [(((0,) * arity, bases), b**shift)])

    return ev(tree.body)
