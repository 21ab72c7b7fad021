from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import QQ_I

from heisenweyl.polynomial import Polynomial
from heisenweyl.weyl import (
    ExpPoly,
    QuaternionPair,
    RelationViolatedError,
    check_commutator,
    derive_op,
    generator_tau,
    mult_exp_op,
    mult_lin_op,
    proportionality_exponent,
    random_exppoly,
    random_vector,
    shift_op,
    weyl_exchange_exponent,
    weyl_op,
    weyl_relation_discrepancy,
)

HALF = QQ_I(Fraction(1, 2), 0)
seeds = st.integers(0, 2**32 - 1)


def q(re, im=0):
    return QQ_I(Fraction(re), Fraction(im))


def instance(seed, d=2, degree=2):
    gen = np.random.default_rng(seed)
    return gen, random_exppoly(d, degree, gen)


def test_exppoly_canonical_form():
    x = Polynomial.variable(1, 0, q(1))
    f = ExpPoly(1, {((q(1),), q(0)): x})
    assert (f - f).is_zero
    assert f + f == f.scale(q(2))
    g = ExpPoly.exponential([q(2)], q(1))
    assert g.scale_exp(q(-1)) == ExpPoly.exponential([q(2)])
    assert (g * g) == ExpPoly.exponential([q(4)], q(2))


def test_exppoly_evaluation_matches_sympy():
    xs = sympy.symbols("x1 x2")
    gen, f = instance(1)
    point = [0.3 - 0.2j, 0.7]
    expr = f.to_sympy(xs).subs({xs[0]: point[0], xs[1]: point[1]})
    assert complex(sympy.N(expr, 30)) == pytest.approx(f(point), rel=1e-12)


def test_shift_of_exponential():
    # exp<x + a | c> = exp<a|c> exp<x|c>
    f = ExpPoly.exponential([q(0, 1)])
    assert shift_op(f, [q(2)]) == f.scale_exp(q(2) * q(0, -1))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_commutation_relations(seed):
    gen, f = instance(seed)
    a, b = random_vector(2, gen), random_vector(2, gen)
    assert check_commutator(a, b, f) == (True, True)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_group_laws(seed):
    gen, f = instance(seed)
    a, a2 = random_vector(2, gen), random_vector(2, gen)
    total = [x + y for x, y in zip(a, a2)]
    assert shift_op(shift_op(f, a), a2) == shift_op(f, total)
    assert mult_exp_op(mult_exp_op(f, a), a2) == mult_exp_op(f, total)
    assert weyl_op(f, [q(0)] * 2, [q(0)] * 2) == f


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cocycle_sign_is_plus(seed):
    gen, f = instance(seed)
    h = QuaternionPair(random_vector(2, gen), random_vector(2, gen))
    h2 = QuaternionPair(random_vector(2, gen), random_vector(2, gen))
    im = h.im_inner(h2)
    assert weyl_relation_discrepancy(h, h2, f) == im * HALF
    assert weyl_exchange_exponent(h, h2, f) == -im
    assert h2.im_inner(h) == -im


def test_im_inner_vanishes_on_diagonal():
    h = QuaternionPair((q(1, 2), q(-3)), (q(0, 1), q(5, 1)))
    assert not h.im_inner(h)
    assert not h.im_inner(h.scale(q(3)))


def test_weyl_unit_and_inverse():
    gen, f = instance(7)
    h = QuaternionPair(random_vector(2, gen), random_vector(2, gen))
    # W(h) W(-h) = exp(-Im<h|-h>/2) W(0) = id
    assert h.weyl(h.scale(q(-1)).weyl(f)) == f


def test_generator_tau_matches_sum():
    gen, f = instance(3)
    a, b = random_vector(2, gen), random_vector(2, gen)
    assert generator_tau(a, b, f) == mult_lin_op(f, b) + derive_op(f, a)


def test_proportionality_rejects_unrelated():
    f = ExpPoly.from_polynomial(Polynomial.variable(1, 0, q(1)))
    g = ExpPoly.from_polynomial(Polynomial.constant(1, q(1)))
    with pytest.raises(RelationViolatedError):
        proportionality_exponent(f, g)
    assert proportionality_exponent(f.scale_exp(q(3)), f) == q(3)


def test_operators_are_linear():
    gen, f = instance(11)
    _, g = instance(12)
    a, b = random_vector(2, gen), random_vector(2, gen)
    assert weyl_op(f + g, a, b) == weyl_op(f, a, b) + weyl_op(g, a, b)
    assert derive_op(f.scale(q(2, 1)), a) == derive_op(f, a).scale(q(2, 1))
