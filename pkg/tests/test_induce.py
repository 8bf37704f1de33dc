import itertools
import random
from fractions import Fraction

import pytest

from explie.algebra import Generator, lie_add, registry_algebra
from explie.exactnum import ONE, P, Scalar
from explie.exppoly import evaluate
from explie.gmodule import DegreeError, parse_module_text, registry_module
from explie.induce import (
    DepthError,
    InducedModule,
    PBWWord,
    WeightError,
    compositions,
    lower_shapes,
    raise_shapes,
    vector_degree_weight,
)

G = Generator
LAM, MU = Fraction(1, 2), Fraction(1, 3)


@pytest.fixture(scope="module")
def vir():
    return InducedModule(registry_module("vir-intermediate"))


@pytest.fixture(scope="module")
def tor():
    return InducedModule(registry_module("loop-q2"))


def test_compositions():
    assert compositions(3) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert compositions(0) == [()]


def test_monomial_bookkeeping(vir, tor):
    w = vir.monomial([(1, "d")], [(3,)], "v", (0,))
    assert w == PBWWord((G("d", -1, (3,)),), "v", (-3,))
    assert w.degree == -1 and w.weight == (0,)
    t = tor.monomial([(1, "e")], [(2,)], "0", (1,))
    assert t.degree == -1 and t.weight == (1,) and t.base == (-1,)
    with pytest.raises(ValueError):
        vir.monomial([(1, "x")], [(0,)], "v", (0,))
    with pytest.raises(WeightError):
        vir.monomial([(1, "d")], [(0, 0)], "v", (0,))


def test_empty_word_is_v(vir):
    x = vir.base_vector("v", (2,))
    assert vir.apply_raising_word([], x) == {("v", (2,)): ONE}


def test_raising_on_v_is_zero(vir):
    assert vir.apply_generator(G("d", 1, (0,)), vir.base_vector("v", (0,))) == {}


def test_degree_zero_delegates_to_module(vir):
    out = vir.apply_generator(G("d", 0, (1,)), vir.base_vector("v", (2,)))
    assert out == {PBWWord((), "v", (3,)): LAM + P * Fraction(7, 3)}


def test_two_step_example():
    I = InducedModule(registry_module("vir-intermediate", **{"lambda": 0, "mu": 0}))
    x = I.monomial_vector([(1, "d")], [(1,)], "v", (5,))
    out = I.apply_raising_word([G("d", 1, (0,))], x)
    assert out == {("v", (5,)): (-2 + P) * (4 * P)}


def test_raising_degree_mismatch(vir):
    x = vir.monomial_vector([(1, "d")], [(1,)], "v", (0,))
    with pytest.raises(DegreeError):
        vir.apply_raising_word([G("d", 2, (0,))], x)
    with pytest.raises(DegreeError):
        vir.apply_raising_word([G("d", 0, (0,))], x)


def random_vector(I, rng, i, alpha):
    out = {}
    for _ in range(3):
        shape = rng.choice(lower_shapes(I.algebra, i))
        betas = [tuple(rng.randint(-2, 2) for _ in range(I.n)) for _ in shape]
        j = rng.choice(I.module.J)
        lie_add(out, I.monomial(shape, betas, j, alpha), Scalar(rng.randint(-3, 3)))
    return out


def scale_add(x, y, a, b):
    out = {}
    for w, c in x.items():
        lie_add(out, w, a * c)
    for w, c in y.items():
        lie_add(out, w, b * c)
    return out


def raising_images(I, x, words):
    """Images of x under raising words; they only depend on the class of x in the module."""
    dw = vector_degree_weight(x)
    if dw is None:
        return {}
    out = {}
    for w in words.get(-dw[0], []):
        out[tuple(w)] = I.apply_raising_word(w, x)
    return out


def sampled_raising_words(I, rng, dmax, count=12):
    words = {0: [[]]}
    for d in range(1, dmax + 1):
        words[d] = []
        for _ in range(count):
            rs = rng.choice(raise_shapes(I.algebra, d))
            words[d].append(I.raising_word(rs, [(rng.randint(-1, 1),) for _ in rs]))
    return words


@pytest.mark.parametrize("which", ["vir", "tor"])
def test_linearity_and_commutator(which, vir, tor):
    I = vir if which == "vir" else tor
    A = I.algebra
    rng = random.Random(7)
    gens = A.generators([-1, 0, 1], 2)
    words = sampled_raising_words(I, rng, 3)
    for _ in range(20):
        alpha = (rng.randint(-2, 2),)
        x, y = random_vector(I, rng, 1, alpha), random_vector(I, rng, 1, alpha)
        g, h = rng.choice(gens), rng.choice(gens)
        a, b = Scalar(rng.randint(-3, 3)), Scalar(rng.randint(-3, 3))
        lhs = I.apply_generator(g, scale_add(x, y, a, b))
        rhs = scale_add(I.apply_generator(g, x), I.apply_generator(g, y), a, b)
        assert lhs == rhs
        gh = I.apply_generator(g, I.apply_generator(h, x))
        hg = I.apply_generator(h, I.apply_generator(g, x))
        comm = I.apply_element(A.bracket(g, h), x)
        diff = scale_add(scale_add(gh, hg, ONE, -ONE), comm, ONE, -ONE)
        assert all(not v for v in raising_images(I, diff, words).values())


def test_action_shifts_degree_and_weight(tor):
    rng = random.Random(1)
    for _ in range(30):
        x = random_vector(tor, rng, 2, (1,))
        g = G(rng.choice("efh"), rng.randint(-1, 2), (rng.randint(-2, 2),))
        y = tor.apply_generator(g, x)
        dw = vector_degree_weight(y)
        if dw is not None:
            assert dw == (-2 + g.i, (1 + g.alpha[0],))


def vir_h(beta, gamma, a):
    # closed form for one lowering and one raising letter
    return (-2 + P * (beta - gamma)) * (LAM + P * (a - beta) + MU * P * (beta + gamma))


def test_symbolic_single_letters_closed_form(vir):
    img = vir.symbolic_reduce([(1, "d")], [(1, "d")], "v")
    assert img.nvars == 3
    for b, g, a in itertools.product(range(-2, 3), repeat=3):
        assert evaluate(img.h["v"], img.point([(b,)], [(g,)], (a,))) == vir_h(b, g, a)


def test_symbolic_empty_shapes(tor):
    img = tor.symbolic_reduce([], [], "1")
    assert set(img.h) == {"1"}
    assert evaluate(img.h["1"], img.point([], [], (0,))) == 1


def test_symbolic_depth_cap():
    I = InducedModule(registry_module("vir-intermediate"), depth=1)
    with pytest.raises(DepthError):
        I.symbolic_reduce([(1, "d"), (1, "d")], [(2, "d")], "v")
    with pytest.raises(DegreeError):
        I.symbolic_reduce([(1, "d")], [(2, "d")], "v")


@pytest.mark.parametrize("which", ["vir", "tor"])
def test_symbolic_matches_concrete(which, vir, tor):
    I = vir if which == "vir" else tor
    rng = random.Random(4)
    for i in (1, 2):
        for ls in lower_shapes(I.algebra, i):
            for rs in raise_shapes(I.algebra, i):
                j = rng.choice(I.module.J)
                img = I.symbolic_reduce(ls, rs, j)
                for _ in range(3):
                    betas = [(rng.randint(-3, 3),) for _ in ls]
                    gammas = [(rng.randint(-3, 3),) for _ in rs]
                    alpha = (rng.randint(-3, 3),)
                    out = I.apply_raising_word(I.raising_word(rs, gammas), I.monomial_vector(ls, betas, j, alpha))
                    target = (alpha[0] + sum(g[0] for g in gammas),)
                    pt = img.point(betas, gammas, alpha)
                    for l in I.module.J:
                        expect = out.get((l, target), Scalar(0))
                        got = evaluate(img.h[l], pt) if l in img.h else Scalar(0)
                        assert got == expect


def test_abelian_algebra_images_vanish():
    A = registry_algebra("toroidal-abelian")
    M = parse_module_text("[module]\nJ = v\n[action]\nx1,v = v: 2^a1 * 3^b1\n", A)
    I = InducedModule(M)
    img = I.symbolic_reduce([(1, "x1")], [(1, "x1")], "v")
    assert img.h == {}


def test_non_homogeneous_rejected(vir):
    x = vir.monomial_vector([(1, "d")], [(0,)], "v", (0,))
    x.update(vir.monomial_vector([(1, "d")], [(0,)], "v", (1,)))
    with pytest.raises(WeightError):
        vector_degree_weight(x)
