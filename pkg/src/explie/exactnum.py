"""Exact scalars in Q(p) and fraction-free linear algebra over them.

A :class:`Scalar` is a reduced rational function in one formal
indeterminate ``p`` with rational coefficients.  Since ``p`` is
transcendental over Q, zero-testing is exact: a scalar vanishes iff its
numerator is the zero polynomial.

Polynomial arithmetic is delegated to FLINT (``python-flint``).
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Sequence

import flint

__all__ = [
    "Scalar",
    "ExactMatrix",
    "DimensionError",
    "P",
    "ZERO",
    "ONE",
    "parse_scalar",
    "as_scalar",
    "mat_det",
    "mat_rank",
    "mat_nullspace",
]


class DimensionError(ValueError):
    """Raised for shape mismatches in matrix operations."""


_POLY_ZERO = flint.fmpq_poly([])
_POLY_ONE = flint.fmpq_poly([1])


def _to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _fmpq_to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _poly_key(poly: flint.fmpq_poly) -> tuple:
    return tuple(_fmpq_to_fraction(c) for c in poly.coeffs())


class Scalar:
    """An element of Q(p), kept as ``num/den`` with ``gcd = 1`` and monic ``den``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        elif isinstance(value, flint.fmpq_poly):
            self.num, self.den = value, _POLY_ONE
        else:
            self.num, self.den = flint.fmpq_poly([_to_fmpq(value)]), _POLY_ONE
        self._hash = None

    @classmethod
    def _raw(cls, num: flint.fmpq_poly, den: flint.fmpq_poly) -> "Scalar":
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def fraction(cls, num: flint.fmpq_poly, den: flint.fmpq_poly) -> "Scalar":
        """Build ``num/den`` in lowest terms."""
        if den.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        if num.is_zero():
            return cls._raw(_POLY_ZERO, _POLY_ONE)
        if den.degree() > 0:
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
        lead = den.leading_coefficient()
        if lead != 1:
            num, den = num / lead, den / lead
        return cls._raw(num, den)

    @classmethod
    def poly(cls, coeffs: Sequence) -> "Scalar":
        """Polynomial in ``p`` from ascending coefficients."""
        return cls._raw(flint.fmpq_poly([_to_fmpq(c) for c in coeffs]), _POLY_ONE)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_rational(self) -> bool:
        """True when the value does not involve ``p``."""
        return self.den.is_one() and self.num.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} depends on p")
        if self.num.is_zero():
            return Fraction(0)
        return _fmpq_to_fraction(self.num.coeffs()[0])

    def p_degree(self) -> int:
        """Degree in ``p`` of a polynomial scalar (-1 for zero)."""
        if not self.den.is_one():
            raise ValueError("not a polynomial in p")
        return self.num.degree()

    def coefficients(self) -> tuple[Fraction, ...]:
        """Ascending coefficients of a polynomial scalar."""
        if not self.den.is_one():
            raise ValueError("not a polynomial in p")
        return _poly_key(self.num)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num + other.num, _POLY_ONE)
        if self.den == other.den:
            return Scalar.fraction(self.num + other.num, self.den)
        return Scalar.fraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, _POLY_ONE)
        return Scalar.fraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar.fraction(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        if other.is_rational():
            c = other.num.coeffs()[0]
            return Scalar._raw(self.num / c, self.den)
        return Scalar.fraction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return Scalar._raw(self.num**k, self.den**k)

    # -- comparison / hashing -----------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((_poly_key(self.num), _poly_key(self.den)))
        return self._hash

    def __call__(self, value) -> Fraction:
        """Specialise ``p`` to a rational number."""
        v = _to_fmpq(value)
        return _fmpq_to_fraction(self.num(v)) / _fmpq_to_fraction(self.den(v))

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if self.den.is_one():
            return _format_poly(self.num)
        return f"({_format_poly(self.num)})/({_format_poly(self.den)})"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, flint.fmpq)):
        return Scalar(x)
    return NotImplemented


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions, strings and Scalars to :class:`Scalar`."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar(x)


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def _format_poly(poly: flint.fmpq_poly) -> str:
    coeffs = _poly_key(poly)
    if not coeffs:
        return "0"
    parts: list[str] = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _format_coeff(mag)
        else:
            mono = "p" if k == 1 else f"p^{k}"
            body = mono if mag == 1 else f"{_format_coeff(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


P = Scalar._raw(flint.fmpq_poly([0, 1]), _POLY_ONE)
ZERO = Scalar(0)
ONE = Scalar(1)


# -- text form ----------------------------------------------------------------

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_scalar(text: str, env: dict | None = None) -> Scalar:
    """Parse the text form, e.g. ``"(1/2) + (7/3)*p"``.

    ``env`` may bind extra names to integers or Scalars.
    """
    names = {"p": P}
    if env:
        names.update({k: as_scalar(v) for k, v in env.items()})
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad scalar expression {text!r}") from exc
    return _eval_scalar(tree.body, names, text)


def _eval_scalar(node, names, text) -> Scalar:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Scalar(node.value)
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ValueError(f"unknown symbol {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_scalar(node.operand, names, text)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_scalar(node.left, names, text)
            exp = _eval_scalar(node.right, names, text)
            if not exp.is_rational() or exp.to_fraction().denominator != 1:
                raise ValueError(f"non-integer exponent in {text!r}")
            return base ** int(exp.to_fraction())
        if type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](
                _eval_scalar(node.left, names, text), _eval_scalar(node.right, names, text)
            )
    raise ValueError(f"unsupported syntax in scalar expression {text!r}")


# -- matrices -----------------------------------------------------------------


class ExactMatrix:
    """Dense rectangular matrix of Scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = [[as_scalar(x) for x in row] for row in entries]
        widths = {len(r) for r in grid}
        if len(widths) > 1:
            raise DimensionError("ragged matrix rows")
        self.rows = len(grid)
        self.cols = widths.pop() if widths else (cols or 0)
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {ij} outside {self.rows}x{self.cols}")
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(col) for col in zip(*self.entries)], cols=self.rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for row in self.entries:
            out.append([sum((row[k] * other.entries[k][j] for k in range(self.cols)), ZERO)
                        for j in range(other.cols)])
        return ExactMatrix(out, cols=other.cols)

    def apply(self, vec: Sequence) -> list[Scalar]:
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        return [sum((a * as_scalar(b) for a, b in zip(row, vec)), ZERO) for row in self.entries]

    def is_rational(self) -> bool:
        return all(x.is_rational() for row in self.entries for x in row)


def _polynomial_rows(m: ExactMatrix) -> tuple[list[list[flint.fmpq_poly]], Scalar]:
    """Clear denominators row by row; return the rows and the product of row multipliers."""
    out = []
    scale = ONE
    for row in m.entries:
        den = _POLY_ONE
        for x in row:
            if not x.den.is_one():
                den = den * (x.den / den.gcd(x.den))
        out.append([x.num * (den / x.den) if not x.den.is_one() else x.num * den for x in row])
        if not den.is_one():
            scale = scale * Scalar._raw(den, _POLY_ONE)
    return out, scale


def _bareiss(rows: list[list[flint.fmpq_poly]], ncols: int) -> tuple[int, int, flint.fmpq_poly]:
    """Fraction-free row echelon in place. Returns (rank, row-swap sign, last pivot)."""
    nrows = len(rows)
    prev = _POLY_ONE
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        best = None
        for i in range(r, nrows):
            e = rows[i][c]
            if not e.is_zero():
                # low-degree pivots keep intermediate degrees small
                deg = e.degree()
                if best is None or deg < best:
                    piv, best = i, deg
                    if deg == 0:
                        break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        prow = rows[r]
        pc = prow[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            ec = row[c]
            if ec.is_zero():
                for j in range(c + 1, ncols):
                    if not row[j].is_zero():
                        row[j] = (pc * row[j]) / prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (pc * row[j] - ec * prow[j]) / prev
            row[c] = _POLY_ZERO
        prev = pc
        r += 1
    return r, sign, prev


def mat_det(m: ExactMatrix) -> Scalar:
    """Exact determinant by Bareiss elimination over Q[p]."""
    if m.rows != m.cols:
        raise DimensionError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return ONE
    rows, scale = _polynomial_rows(m)
    rank, sign, last = _bareiss(rows, n)
    if rank < n:
        return ZERO
    det = Scalar._raw(last, _POLY_ONE)
    if sign < 0:
        det = -det
    return det / scale


def mat_rank(m: ExactMatrix) -> int:
    """Exact rank over Q(p)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.is_rational():
        fm = flint.fmpq_mat(m.rows, m.cols, [_to_fmpq(x.to_fraction()) for row in m.entries for x in row])
        return fm.rank()
    rows, _ = _polynomial_rows(m)
    return _bareiss(rows, m.cols)[0]


def rank_of_rows(rows: Sequence[Sequence[Scalar]], ncols: int) -> int:
    """Rank of a list of Scalar rows without building an ExactMatrix first."""
    if not rows or ncols == 0:
        return 0
    return mat_rank(ExactMatrix(rows, cols=ncols))


def mat_nullspace(m: ExactMatrix) -> list[list[Scalar]]:
    """Basis of the right null space, one vector per free column."""
    rows = [list(r) for r in m.entries]
    ncols = m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for pr, pc in enumerate(pivots):
            vec[pc] = -rows[pr][fc]
        basis.append(vec)
    return basis
