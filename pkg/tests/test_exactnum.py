from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from explie.exactnum import (
    P,
    DimensionError,
    ExactMatrix,
    Scalar,
    as_scalar,
    mat_det,
    mat_nullspace,
    mat_rank,
    parse_scalar,
)

ps = sympy.Symbol("p")


def to_sympy(s: Scalar):
    return sympy.sympify(str(s).replace("^", "**"), locals={"p": ps})


small_poly = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=3)
scalars = st.builds(Scalar.poly, small_poly)


def test_arithmetic_and_text():
    x = Scalar(Fraction(1, 2)) + P * Fraction(7, 3)
    assert str(x) == "(1/2) + (7/3)*p"
    assert (x - x).is_zero()
    assert (P / P) == Scalar(1)
    assert (1 / (1 + P)) * (1 + P) == 1
    assert parse_scalar("(1+p)^2") == 1 + 2 * P + P * P


def test_exact_division_only():
    assert (P * P + P) / P == P + 1
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)


def test_rational_hash_matches_fraction():
    assert hash(Scalar(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert Scalar(Fraction(3, 4)) == Fraction(3, 4)
    assert as_scalar("1/3") == Fraction(1, 3)


def test_specialize_p():
    assert ((P + 1) / (P - 2))(5) == Fraction(2)


def test_fixed_determinants():
    assert mat_det(ExactMatrix([[1, 0, 0], [2, 2, 2], [4, 8, 16]])) == 16
    assert mat_det(ExactMatrix([[1, P], [P, P * P]])) == 0
    assert mat_rank(ExactMatrix([[1, 1], [1, 3]])) == 2
    assert mat_nullspace(ExactMatrix([[1, 1]])) == [[Scalar(-1), Scalar(1)]]


def test_det_requires_square():
    with pytest.raises(DimensionError):
        mat_det(ExactMatrix([[1, 2, 3], [4, 5, 6]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(scalars, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_against_sympy(rows):
    ours = mat_det(ExactMatrix(rows))
    ref = sympy.Matrix([[to_sympy(x) for x in r] for r in rows]).det()
    assert sympy.simplify(to_sympy(ours) - ref) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_and_nullspace_against_sympy(r, c, data):
    rows = [[data.draw(scalars) for _ in range(c)] for _ in range(r)]
    if data.draw(st.booleans()) and r > 1:
        rows[-1] = [a + b for a, b in zip(rows[0], rows[1 % r])]
    m = ExactMatrix(rows)
    ref = sympy.Matrix([[to_sympy(x) for x in row] for row in rows])
    assert mat_rank(m) == ref.rank(simplify=True)
    null = mat_nullspace(m)
    assert len(null) == c - mat_rank(m)
    for v in null:
        assert all(x.is_zero() for x in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
