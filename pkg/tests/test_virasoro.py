import random
from fractions import Fraction

import pytest
import sympy

from explie.exactnum import P, Scalar
from explie.induce import InducedModule
from explie.quotient import radical_membership
from explie.virasoro import (
    MElem,
    ReducedSpanSet,
    degree_zero_combination,
    head_combination,
    moment_null_space,
    odd_double_factorial,
    vir_bound_report,
    vir_module,
    vir_moment_nullvector,
    vir_weight_dim,
    weight_independence_table,
)


@pytest.fixture(scope="module")
def I():
    return InducedModule(vir_module())


def lagrange_nullvector(target, nodes):
    """Independent oracle: b_x = -prod_{y != x} (target - y) / (x - y)."""
    out = {}
    for x in nodes:
        c = Fraction(1)
        for y in nodes:
            if y != x:
                c *= Fraction(target - y, x - y)
        out[x] = -c
    return out


def test_melem():
    assert MElem(-1, 3).to_scalar() == -1 + 3 * P
    assert str(MElem(0, 2)) == "2*p"


def test_odd_double_factorial():
    assert [odd_double_factorial(n) for n in range(4)] == [1, 3, 15, 105]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_reduced_span_set_size(n):
    assert len(ReducedSpanSet(n).indices()) == odd_double_factorial(n) == len(ReducedSpanSet(n))


def test_reduced_words_have_right_weight(I):
    for w in ReducedSpanSet(2).words(I, 4):
        assert w.degree == -2 and w.weight == (4,)


def test_moment_nullvector_examples():
    assert vir_moment_nullvector(3, 0) == {0: -1, 1: 3, 2: -3}
    assert vir_moment_nullvector(0, 0) == {0: -1, 1: 0, 2: 0}
    assert vir_moment_nullvector(MElem(0, 1), 0) == {0: 0, 1: -1, 2: 0}


@pytest.mark.parametrize("target", [-3, 5, 7, 9])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_moment_nullvector_matches_lagrange(target, n):
    nodes = list(range(2 * n + 3))
    assert vir_moment_nullvector(target, n) == lagrange_nullvector(target, nodes)


def test_weight_dims_at_default_parameters():
    assert vir_weight_dim(0, 0) == 1
    assert vir_weight_dim(1, 0) == 3
    assert vir_weight_dim(1, MElem(0, 2)) == 3


def test_zero_action_gives_zero():
    assert vir_weight_dim(1, 0, module=vir_module(zero=True)) == 0


def test_bound_report():
    rows = vir_bound_report(2)
    assert [(r["i"], r["bound"]) for r in rows] == [(0, 1), (1, 3), (2, 15)]
    assert rows[0]["dim"] == 1
    assert all(r["pass"] and r["dim"] <= r["bound"] for r in rows)
    with pytest.raises(ValueError):
        vir_bound_report(4)


def test_weight_independence_tables():
    t1 = weight_independence_table(1, (0, 1, 2, -1))
    assert t1["equal"] and {r["dim"] for r in t1["rows"]} == {3}
    assert weight_independence_table(1, (5,))["equal"]
    assert weight_independence_table(2, (0, 1))["equal"]


@pytest.mark.parametrize("n", [0, 1, 2])
def test_head_letter_rewrites_into_reduced_span(I, n):
    """d_(-1+beta') over an inner word minus its P_(n+1) combination is radical."""
    rng = random.Random(n)
    for _ in range(2):
        beta = rng.choice([k for k in range(-4, 9) if not 0 <= k <= 2 * n + 2])
        inner = [rng.randint(-2, 2) for _ in range(n)]
        b = vir_moment_nullvector(beta, n)
        coeffs = {beta: Scalar(1), **b}
        x = head_combination(I, coeffs, inner, rng.randint(-2, 2))
        assert radical_membership(I, x, "symbolic")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_vanishing_moments_give_radical_vectors(I, n):
    rng = random.Random(10 + n)
    nodes = rng.sample(range(-5, 6), 2 * n + 4)
    inner = [rng.randint(-2, 2) for _ in range(n)]
    (b,) = moment_null_space(nodes, 2 * n + 2)
    x = head_combination(I, dict(zip(nodes, b)), inner, 1)
    assert radical_membership(I, x, "grid")
    (b2,) = moment_null_space(nodes[:-1], 2 * n + 1)
    z = degree_zero_combination(I, dict(zip(nodes[:-1], b2)), inner, 2)
    if n == 0:
        assert z == {}
    else:
        assert radical_membership(I, z, "symbolic")


def test_generic_combination_not_radical(I):
    x = head_combination(I, {0: Scalar(1), 1: Scalar(2), 2: Scalar(-1), 5: Scalar(1)}, [1], 0)
    assert not radical_membership(I, x, "grid")
    assert not radical_membership(I, x, "symbolic")


def test_parameters_may_depend_on_p():
    assert vir_weight_dim(1, 0, lam=Fraction(1, 2), mu=Fraction(1, 3)) <= 3
    M = vir_module(lam=Scalar(1) + P, mu=Fraction(1, 5))
    assert vir_weight_dim(1, 0, module=M) <= 3


def test_sympy_cross_check_level_one():
    """Level-one dimension via an independent closed-form pairing built in sympy."""
    p = sympy.Symbol("p")
    lam, mu = sympy.Rational(1, 2), sympy.Rational(1, 3)

    def h(beta, gamma, a=0):
        return (-2 + (beta - gamma) * p) * (lam + (a - beta) * p + mu * (beta + gamma) * p)

    m = sympy.Matrix([[sympy.expand(h(b, g)) for g in range(-4, 5)] for b in range(-4, 5)])
    assert m.rank() == vir_weight_dim(1, 0) == 3
