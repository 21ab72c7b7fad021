"""Exact Weyl operator algebra on exponential polynomials.

An :class:`ExpPoly` is a finite sum ``sum_k p_k(x) exp(kappa_k + <x|c_k>)``
with ``<x|c> = sum_i x_i conj(c_i)``, polynomial coefficients, exponent
vectors ``c_k`` and scalar exponents ``kappa_k`` all in Q(i).  Terms are keyed
by ``(c, kappa)``; for algebraic exponents distinct keys are linearly
independent (Lindemann-Weierstrass), so the keyed form is canonical and
equality is exact dictionary equality.

Operators::

    shift_op      (T_a f)(x)  = f(x + a)
    mult_exp_op   (M_b f)(x)  = exp<x|b> f(x)
    derive_op     d/dz f(x + z a) at z = 0
    mult_lin_op   <x|b> f(x)
    weyl_op       W(a, b) = exp(<a|b>/2) M_b T_a
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from sympy.polys.domains import QQ_I

from ._numbers import conj, exact, inner, to_complex
from .polynomial import Polynomial, multi_indices

__all__ = [
    "ExpPoly",
    "QuaternionPair",
    "RelationViolatedError",
    "shift_op",
    "mult_exp_op",
    "derive_op",
    "mult_lin_op",
    "weyl_op",
    "proportionality_exponent",
    "weyl_relation_discrepancy",
    "weyl_exchange_exponent",
    "check_commutator",
    "generator_tau",
    "random_vector",
    "random_exppoly",
]

ZERO = QQ_I(0, 0)


class RelationViolatedError(ArithmeticError):
    """Two sides that should agree up to a scalar factor do not."""


def _vec(v, d: int | None = None) -> tuple:
    out = tuple(exact(x) for x in v)
    if d is not None and len(out) != d:
        raise ValueError(f"expected a vector of length {d}, got {len(out)}")
    return out


def _exact_poly(p: Polynomial) -> Polynomial:
    return p if p.is_exact else p.exact()


class ExpPoly:
    """Canonical sum of ``p(x) exp(kappa + <x|c>)`` terms over Q(i)."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms=None):
        self.d = d
        clean = {}
        for (c, kappa), p in (terms or {}).items():
            c = _vec(c, d)
            kappa = exact(kappa)
            p = _exact_poly(p)
            if p.d != d:
                raise ValueError("polynomial dimension mismatch")
            key = (c, kappa)
            if key in clean:
                p = clean[key] + p
            if p.is_zero:
                clean.pop(key, None)
            else:
                clean[key] = p
        self.terms = clean

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "ExpPoly":
        return cls(p.d, {((ZERO,) * p.d, ZERO): p})

    @classmethod
    def constant(cls, d: int, value=1) -> "ExpPoly":
        return cls.from_polynomial(Polynomial.constant(d, exact(value)))

    @classmethod
    def exponential(cls, c, kappa=0) -> "ExpPoly":
        c = _vec(c)
        return cls(len(c), {(c, exact(kappa)): Polynomial.constant(len(c), exact(1))})

    @classmethod
    def coerce(cls, f) -> "ExpPoly":
        if isinstance(f, ExpPoly):
            return f
        if isinstance(f, Polynomial):
            return cls.from_polynomial(f)
        raise TypeError(f"cannot interpret {type(f).__name__} as an exponential polynomial")

    # algebra ----------------------------------------------------------------

    def _check(self, other):
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} != {other.d}")

    def __add__(self, other):
        other = ExpPoly.coerce(other)
        self._check(other)
        terms = dict(self.terms)
        for k, p in other.terms.items():
            terms[k] = terms[k] + p if k in terms else p
        return ExpPoly(self.d, terms)

    def __neg__(self):
        return ExpPoly(self.d, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-ExpPoly.coerce(other))

    def scale(self, s) -> "ExpPoly":
        s = exact(s)
        return ExpPoly(self.d, {k: p * s for k, p in self.terms.items()})

    def scale_exp(self, kappa) -> "ExpPoly":
        """Multiply by ``exp(kappa)`` (a key shift, no rounding)."""
        kappa = exact(kappa)
        return ExpPoly(self.d, {(c, k + kappa): p for (c, k), p in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, (ExpPoly, Polynomial)):
            return self.scale(other)
        other = ExpPoly.coerce(other)
        self._check(other)
        out = ExpPoly(self.d)
        for (c1, k1), p1 in self.terms.items():
            for (c2, k2), p2 in other.terms.items():
                c = tuple(a + b for a, b in zip(c1, c2))
                out = out + ExpPoly(self.d, {(c, k1 + k2): p1 * p2})
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (ExpPoly, Polynomial)):
            other = ExpPoly.coerce(other)
            return self.d == other.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.d, frozenset(self.terms)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.terms.values()), default=0)

    # evaluation -------------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        total = 0j
        for (c, kappa), p in self.terms.items():
            lin = sum(xi * np.conj(to_complex(ci)) for xi, ci in zip(x, c))
            total += complex(p.to_complex()(x)) * np.exp(to_complex(kappa) + lin)
        return total

    def to_sympy(self, xs):
        expr = sympy.Integer(0)
        for (c, kappa), p in self.terms.items():
            lin = sum((_sym(conj(ci)) * x for x, ci in zip(xs, c)), sympy.Integer(0))
            expr += p.to_sympy(xs) * sympy.exp(_sym(kappa) + lin)
        return expr

    def __repr__(self):
        if not self.terms:
            return f"ExpPoly(d={self.d}, 0)"
        parts = []
        for (c, kappa), p in self.terms.items():
            parts.append(f"[{p!r}] * exp({kappa} + <x|{list(map(str, c))}>)")
        return f"ExpPoly(d={self.d}, " + " + ".join(parts) + ")"


def _sym(z):
    z = exact(z)
    return sympy.Rational(Fraction(z.x)) + sympy.I * sympy.Rational(Fraction(z.y))


# operators -------------------------------------------------------------------


def shift_op(f, a) -> ExpPoly:
    """``f(x + a)``: polynomials translate, exponentials pick up ``<a|c>``."""
    f = ExpPoly.coerce(f)
    a = _vec(a, f.d)
    return ExpPoly(f.d, {(c, kappa + inner(a, c)): p.translate(a) for (c, kappa), p in f.terms.items()})


def mult_exp_op(f, b) -> ExpPoly:
    """Multiply by ``exp<x|b>``."""
    f = ExpPoly.coerce(f)
    b = _vec(b, f.d)
    return ExpPoly(f.d, {(tuple(ci + bi for ci, bi in zip(c, b)), kappa): p for (c, kappa), p in f.terms.items()})


def derive_op(f, a) -> ExpPoly:
    """Directional derivative along ``a``."""
    f = ExpPoly.coerce(f)
    a = _vec(a, f.d)
    out = {}
    for (c, kappa), p in f.terms.items():
        out[(c, kappa)] = p.directional(a) + p * inner(a, c)
    return ExpPoly(f.d, out)


def mult_lin_op(f, b) -> ExpPoly:
    """Multiply by the linear form ``<x|b>``."""
    f = ExpPoly.coerce(f)
    b = _vec(b, f.d)
    lin = Polynomial.linear_form(b)
    return ExpPoly(f.d, {k: p * lin for k, p in f.terms.items()})


def weyl_op(f, a, b) -> ExpPoly:
    """``W(a, b) f = exp(<a|b>/2) exp<x|b> f(x + a)``."""
    f = ExpPoly.coerce(f)
    a = _vec(a, f.d)
    b = _vec(b, f.d)
    return mult_exp_op(shift_op(f, a), b).scale_exp(inner(a, b) * QQ_I(Fraction(1, 2), 0))


@dataclass(frozen=True)
class QuaternionPair:
    """``h = a + b j`` with ``a, b`` in Q(i)^d."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a, b = _vec(self.a), _vec(self.b)
        if len(a) != len(b):
            raise ValueError("components must share a dimension")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def d(self) -> int:
        return len(self.a)

    def __add__(self, other):
        return QuaternionPair(
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )

    def scale(self, s):
        s = exact(s)
        return QuaternionPair(tuple(s * x for x in self.a), tuple(s * x for x in self.b))

    def im_inner(self, other) -> object:
        """``<a'|b> - <a|b'>``; antisymmetric, zero on the diagonal."""
        return inner(other.a, self.b) - inner(self.a, other.b)

    def weyl(self, f) -> ExpPoly:
        return weyl_op(f, self.a, self.b)


def proportionality_exponent(lhs: ExpPoly, rhs: ExpPoly):
    """The exact ``kappa`` with ``lhs = exp(kappa) rhs``.

    Raises
    ------
    RelationViolatedError
        If no such scalar exists.
    """
    if lhs.is_zero or rhs.is_zero:
        raise RelationViolatedError("cannot compare with the zero function")
    (c0, k0), p0 = next(iter(lhs.terms.items()))
    for (c, k), p in rhs.terms.items():
        if c == c0 and p == p0:
            kappa = k0 - k
            if rhs.scale_exp(kappa) == lhs:
                return kappa
    raise RelationViolatedError("sides are not proportional by a scalar exponential")


def weyl_relation_discrepancy(h: QuaternionPair, h2: QuaternionPair, f) -> object:
    """``kappa`` with ``W(h + h') f = exp(kappa) W(h) W(h') f``."""
    f = ExpPoly.coerce(f)
    return proportionality_exponent((h + h2).weyl(f), h.weyl(h2.weyl(f)))


def weyl_exchange_exponent(h: QuaternionPair, h2: QuaternionPair, f) -> object:
    """``kappa`` with ``W(h) W(h') f = exp(kappa) W(h') W(h) f``."""
    f = ExpPoly.coerce(f)
    return proportionality_exponent(h.weyl(h2.weyl(f)), h2.weyl(h.weyl(f)))


def check_commutator(a, b, f) -> tuple[bool, bool]:
    """Exact checks of ``[d_a, <.|b>] = <a|b>`` and ``T_a M_b = e^{<a|b>} M_b T_a`` on ``f``."""
    f = ExpPoly.coerce(f)
    a = _vec(a, f.d)
    b = _vec(b, f.d)
    ab = inner(a, b)
    comm = derive_op(mult_lin_op(f, b), a) - mult_lin_op(derive_op(f, a), b)
    first = comm == f.scale(ab)
    lhs = shift_op(mult_exp_op(f, b), a)
    rhs = mult_exp_op(shift_op(f, a), b).scale_exp(ab)
    return first, lhs == rhs


def generator_tau(a, b, f) -> ExpPoly:
    """``d/dtau W(tau a, tau b) f`` at ``tau = 0``, differentiated by sympy.

    Each term ``p exp(kappa + <x|c>)`` of ``f`` keeps its exponential; the
    tau-dependent factor ``exp(tau^2<a|b>/2 + tau<x|b> + tau<a|c>) p(x + tau a)``
    is differentiated symbolically and converted back to an exact polynomial.
    """
    f = ExpPoly.coerce(f)
    a = _vec(a, f.d)
    b = _vec(b, f.d)
    tau = sympy.Symbol("tau")
    xs = sympy.symbols(f"x1:{f.d + 1}")
    ab = _sym(inner(a, b))
    xb = sum((_sym(conj(bi)) * x for x, bi in zip(xs, b)), sympy.Integer(0))
    shifted = {x: x + tau * _sym(ai) for x, ai in zip(xs, a)}
    out = {}
    for (c, kappa), p in f.terms.items():
        ac = _sym(inner(a, c))
        factor = sympy.exp(tau**2 * ab / 2 + tau * xb + tau * ac) * p.to_sympy(xs).xreplace(shifted)
        deriv = sympy.expand(sympy.diff(factor, tau).subs(tau, 0))
        out[(c, kappa)] = _from_sympy(deriv, xs)
    return ExpPoly(f.d, out)


def _from_sympy(expr, xs) -> Polynomial:
    poly = sympy.Poly(expr, *xs, domain=sympy.QQ_I)
    coeffs = {}
    for m, c in poly.terms():
        re, im = (sympy.Rational(v) for v in c.as_real_imag())
        coeffs[m] = QQ_I(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return Polynomial(len(xs), coeffs)


# random instances ------------------------------------------------------------


def random_scalar(rng, bound: int = 6, denom: int = 4):
    re = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, denom + 1)))
    im = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, denom + 1)))
    return QQ_I(re, im)


def random_vector(d: int, rng, bound: int = 6, denom: int = 4) -> tuple:
    return tuple(random_scalar(rng, bound, denom) for _ in range(d))


def random_exppoly(d: int, degree: int, rng, nterms: int = 2, density: float = 0.5) -> ExpPoly:
    """Random exact instance: ``nterms`` exponentials (one of them trivial) times polynomials."""
    out = ExpPoly(d)
    alphas = list(multi_indices(d, degree))
    for k in range(nterms):
        c = (ZERO,) * d if k == 0 else random_vector(d, rng, 2, 2)
        coeffs = {}
        for alpha in alphas:
            if rng.random() < density:
                coeffs[alpha] = random_scalar(rng)
        if not coeffs:
            coeffs[alphas[-1]] = exact(1)
        out = out + ExpPoly(d, {(c, ZERO): Polynomial(d, coeffs)})
    if out.is_zero:
        out = ExpPoly.constant(d)
    return out
