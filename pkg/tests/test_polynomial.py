from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.polys.domains import QQ_I

from heisenweyl.polynomial import Polynomial, alpha_factorial, multi_indices

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def exact_polys(draw, d=2, max_degree=3):
    coeffs = {}
    for alpha in multi_indices(d, max_degree):
        if draw(st.booleans()):
            coeffs[alpha] = QQ_I(draw(small), draw(small))
    return Polynomial(d, coeffs)


def test_multi_indices_count():
    # C(d + n, n) exponents of degree <= n
    assert len(list(multi_indices(3, 4))) == 35
    assert all(sum(a) == 2 for a in multi_indices(2, 2, 2))
    assert alpha_factorial((2, 3)) == 12


def test_zero_terms_dropped():
    p = Polynomial(2, {(1, 0): 0, (0, 1): 2})
    assert len(p) == 1
    assert (p - p).is_zero


@given(exact_polys(), exact_polys(), exact_polys())
def test_ring_axioms_exact(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p


@given(exact_polys(), exact_polys())
def test_derivative_is_derivation(p, q):
    assert (p * q).diff(0) == p.diff(0) * q + p * q.diff(0)


@given(exact_polys(), st.tuples(small, small), st.tuples(small, small))
def test_translation_is_a_group_action(p, a, b):
    a = [QQ_I(x, 0) for x in a]
    b = [QQ_I(x, 0) for x in b]
    assert p.translate(a).translate(b) == p.translate([x + y for x, y in zip(a, b)])


def test_translate_matches_substitution():
    p = Polynomial(2, {(2, 1): 1.0 + 0.5j, (0, 1): -2.0})
    a = [0.3 - 0.1j, 1.2]
    x = np.array([0.7 + 0.2j, -0.4j])
    assert p.translate(a)(x) == pytest.approx(p(x + np.array(a)))


def test_directional_derivative():
    p = Polynomial(2, {(2, 0): 1, (1, 1): 3})
    # d_a p = a1 (2 x1 + 3 x2) + a2 (3 x1)
    assert p.directional([1, 2]) == Polynomial(2, {(1, 0): 8, (0, 1): 3})


def test_linear_form_conjugates():
    p = Polynomial.linear_form([1j, 2])
    assert p.coeffs == {(1, 0): -1j, (0, 1): 2}


def test_evaluate_matches_call():
    p = Polynomial(2, {(2, 1): 1.5, (0, 3): -1j, (0, 0): 2})
    pts = np.array([[0.1, 0.2], [1 + 1j, -0.3], [2, 0]])
    assert np.allclose(p.evaluate(pts), [p(x) for x in pts])


def test_json_roundtrip():
    p = Polynomial(2, {(2, 1): 1.5 - 2j, (0, 0): 3.0})
    assert Polynomial.from_json(p.to_json()) == p


def test_to_sympy():
    xs = sympy.symbols("x1 x2")
    p = Polynomial(2, {(2, 1): Fraction(1, 2), (0, 0): 3})
    assert sympy.expand(p.to_sympy(xs) - (sympy.Rational(1, 2) * xs[0] ** 2 * xs[1] + 3)) == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1})
    with pytest.raises(ValueError):
        Polynomial.constant(1) + Polynomial.constant(2)
