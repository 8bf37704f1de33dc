import random
from fractions import Fraction

import pytest
import sympy

from explie.algebra import Generator, lie_add, registry_algebra
from explie.exactnum import Scalar
from explie.gmodule import registry_module, zero_module
from explie.induce import InducedModule, WeightError
from explie.quotient import (
    dim_record,
    dim_symbolic,
    dim_truncated,
    functional_family,
    pairing_matrix_truncated,
    radical_membership,
)

G = Generator

# regression values, first derived by the truncated-rank oracle and frozen
VIR_DIMS = {0: 1, 1: 3, 2: 9}
TOR_DIMS = {0: 2, 1: 6, 2: 18}


@pytest.fixture(scope="module")
def vir():
    return InducedModule(registry_module("vir-intermediate"))


@pytest.fixture(scope="module")
def tor():
    return InducedModule(registry_module("loop-q2"))


def sl2_level_one_rank():
    """Rank of (x, j) -> ([y, x] v_j)_(y, l) for sl2 on C^2, computed with plain matrices.

    A level-one vector x(beta) v_j pairs with y(gamma) to 2^(beta+gamma) [y, x] v_j, so
    this rank is the level-one dimension of the loop module.
    """
    e = sympy.Matrix([[0, 1], [0, 0]])
    f = sympy.Matrix([[0, 0], [1, 0]])
    h = sympy.Matrix([[1, 0], [0, -1]])
    basis = [e, f, h]
    rows = []
    for x in basis:
        for j in range(2):
            row = []
            for y in basis:
                col = (y * x - x * y)[:, j]
                row.extend(col)
            rows.append(row)
    return sympy.Matrix(rows).rank()


def test_toroidal_level_one_oracle(tor):
    assert sl2_level_one_rank() == 6
    for a in (-1, 0, 1):
        assert dim_symbolic(tor, 1, (a,)) == sl2_level_one_rank()


@pytest.mark.parametrize("i", [0, 1, 2])
def test_virasoro_dims(vir, i):
    ranks, stable, value = dim_truncated(vir, i, (0,), (1, 2, 3))
    assert stable and value == VIR_DIMS[i]
    assert dim_symbolic(vir, i, (0,)) == VIR_DIMS[i]


@pytest.mark.parametrize("i", [0, 1, 2])
def test_toroidal_dims(tor, i):
    boxes = (1, 2, 3) if i < 2 else (1, 2)
    ranks, stable, value = dim_truncated(tor, i, (0,), boxes)
    assert stable and value == TOR_DIMS[i]
    assert dim_symbolic(tor, i, (0,)) == TOR_DIMS[i]


def test_degree_zero_is_dim_v():
    for name in ("loop-q2", "vir-intermediate", "qt-point", "finite-loop"):
        I = InducedModule(registry_module(name))
        assert dim_symbolic(I, 0, ()) == len(I.module.J)
        assert dim_truncated(I, 0, (), (0, 1))[2] == len(I.module.J)


def test_virasoro_level_one_family_is_moments(vir):
    fam = functional_family(vir, [(1, "d")], (0,), "v")
    sigs = fam.signatures()
    assert all(a == (1,) and k[0] <= 2 for k, a in sigs)
    vals = [[fam.values([(b,)])[k] for k in sorted(fam.functions)] for b in range(6)]
    assert sympy.Matrix([[sympy.sympify(str(x).replace("^", "**")) for x in r] for r in vals]).rank() == 3


def test_zero_module_everything_radical():
    I = InducedModule(zero_module(registry_algebra("gen-virasoro")))
    assert functional_family(I, [(1, "d")], (0,), "0").d == 0
    assert pairing_matrix_truncated(I, 1, (0,), 2).rank() == 0
    assert dim_symbolic(I, 1, (0,)) == 0
    x = I.monomial_vector([(1, "d")], [(2,)], "0", (0,))
    assert radical_membership(I, x)


def test_monotone_and_bounded(vir, tor):
    for I, i in ((vir, 1), (vir, 2), (tor, 1)):
        ranks, _, _ = dim_truncated(I, i, (1,), (0, 1, 2))
        vals = [ranks[b] for b in sorted(ranks)]
        assert vals == sorted(vals)
        assert vals[-1] <= dim_symbolic(I, i, (1,))


@pytest.mark.parametrize("name", ["vir-like-zero", "qt-graded", "qt-point", "finite-loop"])
def test_other_modules_oracle_agreement(name):
    I = InducedModule(registry_module(name))
    w = (0,) if I.module.graded else ()
    _, stable, value = dim_truncated(I, 1, w, (1, 2, 3))
    assert stable
    assert value == dim_symbolic(I, 1, w)


def moment_vector(I, b, a0=0):
    x = {}
    for k, c in b.items():
        lie_add(x, I.monomial((((1, "d")),), [(k,)], "v", (a0,)), Scalar(c))
    return x


def test_radical_examples(vir):
    assert radical_membership(vir, {})
    assert not radical_membership(vir, vir.base_vector("v", (0,)))
    x = moment_vector(vir, {3: 1, 0: -1, 1: 3, 2: -3})
    for mode in ("symbolic", "grid", "truncated"):
        assert radical_membership(vir, x, mode)
    y = moment_vector(vir, {3: 1, 0: -1, 1: 3, 2: -2})
    for mode in ("symbolic", "grid", "truncated"):
        assert not radical_membership(vir, y, mode)


def test_non_homogeneous_rejected(vir):
    x = moment_vector(vir, {0: 1})
    x.update(moment_vector(vir, {0: 1}, a0=1))
    with pytest.raises(WeightError):
        radical_membership(vir, x)


def test_moment_condition_equivalence(vir):
    """b with vanishing moments 0..2 gives a radical vector; others are caught on the grid."""
    rng = random.Random(9)
    for _ in range(8):
        nodes = rng.sample(range(-5, 6), 4)
        m = sympy.Matrix([[x**k for x in nodes] for k in range(3)])
        (null,) = m.nullspace()
        b = {x: Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for x, c in zip(nodes, null)}
        x = moment_vector(vir, b, 1)
        assert radical_membership(vir, x, "truncated", B=2)
        assert radical_membership(vir, x, "symbolic")
        bad = {k: v + (1 if k == nodes[0] else 0) for k, v in b.items()}
        assert not radical_membership(vir, moment_vector(vir, bad, 1), "grid")


def test_dim_record_json(tor):
    rec = dim_record(tor, 1, (0,), (1, 2))
    js = rec.to_json()
    assert js["algebra"] == "toroidal-sl2" and js["module"] == "loop-q2"
    assert js["degree"] == -1 and js["weight"] == [0]
    assert js["ranks"] == {"1": 6, "2": 6} and js["stabilized"] and js["symbolic_dim"] == 6


def test_box_schedule_must_increase(vir):
    with pytest.raises(ValueError):
        dim_truncated(vir, 1, (0,), (2, 1))
