import random
from fractions import Fraction

import pytest
import sympy

from explie.exactnum import mat_det, mat_rank
from explie.vandermonde import (
    VSpec,
    build_matrix,
    det_closed_form,
    random_vspec,
    reduce_system,
    reduce_system_multivar,
    superfactorial,
)


def sympy_matrix(spec):
    """Rows n = 0..s-1, columns n^t a^n, built independently."""
    n = sympy.Symbol("n")
    cols = [n**t * sympy.Rational(a.numerator, a.denominator) ** n for a, s in spec.blocks for t in range(s)]
    return sympy.Matrix([[c.subs(n, row) for c in cols] for row in range(spec.s)])


def test_superfactorial():
    assert [superfactorial(m) for m in range(5)] == [1, 1, 2, 12, 288]


@pytest.mark.parametrize(
    "blocks, det",
    [
        (((2, 3),), 16),
        (((1, 2), (2, 1)), 1),
        (((3, 1),), 1),
        (((1, 1), (2, 1), (3, 1)), 2),  # ordinary Vandermonde (2-1)(3-1)(3-2)
    ],
)
def test_fixed_determinants(blocks, det):
    spec = VSpec(blocks)
    assert det_closed_form(spec) == det
    assert mat_det(build_matrix(spec)) == det


def test_invalid_specs():
    with pytest.raises(ValueError):
        VSpec(((0, 1),))
    with pytest.raises(ValueError):
        VSpec(((2, 1), (2, 2)))
    with pytest.raises(ValueError):
        VSpec(((2, 0),))


def test_closed_form_against_sympy():
    rng = random.Random(11)
    for _ in range(25):
        spec = random_vspec(rng)
        ref = sympy_matrix(spec).det()
        assert det_closed_form(spec) == Fraction(int(sympy.fraction(ref)[0]), int(sympy.fraction(ref)[1]))
        assert mat_rank(build_matrix(spec)) == spec.s


def test_reduce_system_matches_sympy_nullspace():
    rng = random.Random(5)
    for _ in range(15):
        spec = random_vspec(rng, max_blocks=3, max_mult=2)
        unknowns = rng.randint(1, 5)
        d = {(k, j): rng.randint(-2, 2) for k in range(unknowns) for j in range(spec.s)}
        red = reduce_system(d, spec)
        ref = sympy.Matrix([[d[(k, j)] for k in range(unknowns)] for j in range(spec.s)])
        assert len(red.finite_null) == len(ref.nullspace())
        assert red.equivalent


def test_reduce_system_dependent_rows():
    # both rows identical: one-dimensional null space survives the transform
    spec = VSpec(((2, 1), (3, 1)))
    red = reduce_system({(0, 0): 1, (1, 0): -1, (0, 1): 1, (1, 1): -1}, spec)
    assert len(red.grid_null) == 1 and red.equivalent


def test_reduce_system_multivar():
    sigs = [((0, 0), (1, 1)), ((1, 0), (2, 1)), ((0, 1), (1, 3))]
    red = reduce_system_multivar({(0, 0): 1, (1, 1): 2, (0, 2): 1, (1, 2): 1}, sigs)
    assert red.equivalent
    assert len(red.finite_null) == 0
