import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from explie.exactnum import P, Scalar, mat_rank
from explie.exppoly import (
    ArityError,
    DuplicateSignatureError,
    ExpPoly,
    InvalidBaseError,
    evaluate,
    expand_in_subset,
    grid_is_nonsingular,
    grid_matrix,
    independence_grid,
    parse_exppoly,
    recombine,
    substitute_affine,
    to_text,
)

bases = st.sampled_from([Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(3)])


def random_exppoly(arity):
    term = st.tuples(
        st.tuples(*[st.integers(0, 2)] * arity),
        st.tuples(*[bases] * arity),
        st.integers(-4, 4),
    )
    return st.lists(term, max_size=4).map(
        lambda ts: sum((ExpPoly.monomial(k, a, c) for k, a, c in ts), ExpPoly.zero(arity))
    )


def brute(terms, x):
    """Direct evaluation of sum c * prod x^k a^x."""
    tot = Fraction(0)
    for k, a, c in terms:
        v = Fraction(c)
        for xi, ki, ai in zip(x, k, a):
            v *= Fraction(xi) ** ki * Fraction(ai) ** xi
        tot += v
    return tot


def test_parse_and_evaluate():
    f = parse_exppoly("3*n1^2*2^n1 + n2", ["n1", "n2"])
    for x in itertools.product(range(-3, 4), repeat=2):
        assert evaluate(f, x) == brute([((2, 0), (2, 1), 3), ((0, 1), (1, 1), 1)], x)


def test_parse_with_p_and_env():
    f = parse_exppoly("(1+p)*n1 + 2^(i*a1)", ["a1", "n1"], env={"i": 2})
    assert evaluate(f, (1, 3)) == 3 * (1 + P) + 4


def test_text_roundtrip():
    f = parse_exppoly("n1^2*2^n1 - 1/2*n2 + p", ["n1", "n2"])
    assert parse_exppoly(to_text(f, ["n1", "n2"]), ["n1", "n2"]) == f


def test_canonical_form_merges_and_drops_zeros():
    f = ExpPoly.monomial((1,), (2,), 3) + ExpPoly.monomial((1,), (2,), -3)
    assert f.is_zero()
    g = ExpPoly.monomial((1,), (2,), 1) + ExpPoly.monomial((1,), (2,), 1)
    assert len(g) == 1


def test_invalid_base_and_arity():
    with pytest.raises(InvalidBaseError):
        ExpPoly.monomial((0,), (0,))
    with pytest.raises(ArityError):
        ExpPoly.variable(0, 1) + ExpPoly.variable(0, 2)


def test_substitute_affine_example():
    # f(x) = x 2^x at x = u + v + 1
    f = ExpPoly.monomial((1,), (2,))
    g = substitute_affine(f, [[1, 1]], [1])
    for u, v in itertools.product(range(-2, 3), repeat=2):
        assert evaluate(g, (u, v)) == (u + v + 1) * Fraction(2) ** (u + v + 1)


@settings(max_examples=60, deadline=None)
@given(random_exppoly(2), st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_substitute_affine_commutes_with_evaluation(f, coeffs):
    A = [coeffs[0:2], coeffs[2:4]]
    b = coeffs[4:6]
    g = substitute_affine(f, A, b)
    for x in itertools.product(range(-2, 3), repeat=2):
        y = [sum(r[t] * x[t] for t in range(2)) + bb for r, bb in zip(A, b)]
        assert evaluate(g, x) == evaluate(f, y)


@settings(max_examples=60, deadline=None)
@given(random_exppoly(3), st.sets(st.integers(0, 2), max_size=3))
def test_expand_recombine_roundtrip(h, S):
    S = sorted(S)
    pairs = expand_in_subset(h, S)
    assert recombine(pairs, S, 3) == h
    assert len({sig for _, sig in pairs}) == len(pairs)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.tuples(bases, bases)),
                min_size=1, max_size=5, unique=True))
def test_independence_grid_full_column_rank(sigs):
    grid = independence_grid(sigs)
    assert grid_is_nonsingular(sigs, grid)
    assert mat_rank(grid_matrix(sigs, grid)) == len(sigs)


def test_independence_grid_gappy_powers():
    # {n, n^2} alone: the completed block {1, n, n^2} gives a 3-point grid
    sigs = [((1,), (1,)), ((2,), (1,))]
    grid = independence_grid(sigs)
    assert len(grid) == 3
    assert grid_is_nonsingular(sigs, grid)


def test_duplicate_signature_rejected():
    with pytest.raises(DuplicateSignatureError):
        independence_grid([((1,), (2,)), ((1,), (2,))])


@settings(max_examples=40, deadline=None)
@given(random_exppoly(2), random_exppoly(2))
def test_ring_operations_match_pointwise(f, g):
    for x in [(0, 0), (1, -1), (2, 3), (-2, 1)]:
        assert evaluate(f * g, x) == evaluate(f, x) * evaluate(g, x)
        assert evaluate(f - g, x) == evaluate(f, x) - evaluate(g, x)


def test_identically_zero_detection():
    f = ExpPoly.monomial((1,), (2,)) * ExpPoly.exponential(Fraction(1, 2), 0, 1)
    assert f == ExpPoly.variable(0, 1)
    assert (f - ExpPoly.variable(0, 1)).is_zero()
    assert evaluate(ExpPoly.constant(Scalar(5), 1), (7,)) == 5
