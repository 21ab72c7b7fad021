"""Gaussian heat semigroup ``G_r = exp(r A)`` with ``A = -sum_m (x_m + d_m)^2``.

``G_r f`` is the Gaussian average of the Weyl operators

    (W_xi f)(x) = exp(-|xi|^2/2) exp(i xi.x) f(x + i xi)

over ``xi`` with density ``prod_m (4 pi r)^{-1/2} exp(-xi_m^2 / 4r)``.  On
inputs of the form ``p(x) exp(sum L_m x_m + q_m x_m^2)`` the average is a
completed-square Gaussian integral per coordinate, so the class
:class:`GaussPoly` is closed under ``G_r``.  Three evaluation routes are
provided: that closed form, tensor Gauss-Hermite quadrature, and the truncated
series ``sum_k r^k A^k f / k!``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from ._numbers import conj, exact, to_complex
from .polynomial import Polynomial, alpha_factorial, multi_indices
from .weyl import ExpPoly, mult_exp_op, shift_op

__all__ = [
    "GaussPoly",
    "GaussTerm",
    "QuadratureField",
    "InsufficientQuadratureError",
    "SeriesBudgetError",
    "generator_apply",
    "generator_apply_gauss",
    "weyl_gaussian_op",
    "gaussian_moment",
    "gaussian_moment_quadrature",
    "gaussian_multimoment",
    "heat_semigroup",
    "heat_one_closed_form",
    "evaluation_grid",
    "evolution_checks",
    "pde_order",
    "generator_at_zero",
]

DEFAULT_NODES = 64
SERIES_MAX_ORDER = 24
SERIES_MAX_DEGREE = 60


class InsufficientQuadratureError(ValueError):
    pass


class SeriesBudgetError(ValueError):
    pass


# GaussPoly -------------------------------------------------------------------


@dataclass(frozen=True)
class GaussTerm:
    """``p(x) exp(<x|ell> + sum_m q_m x_m^2)`` with ``<x|ell> = sum x_m conj(ell_m)``."""

    poly: Polynomial
    linear: tuple
    quad: tuple

    @property
    def linear_coeffs(self) -> np.ndarray:
        """The coefficients ``L_m = conj(ell_m)`` multiplying ``x_m`` in the exponent."""
        return np.conj(np.asarray(self.linear, dtype=complex))


@dataclass(frozen=True)
class GaussPoly:
    d: int
    terms: tuple = ()
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "GaussPoly":
        p = p.to_complex()
        return cls(p.d, (GaussTerm(p, (0j,) * p.d, (0j,) * p.d),))

    @classmethod
    def coerce(cls, f) -> "GaussPoly":
        if isinstance(f, GaussPoly):
            return f
        if isinstance(f, Polynomial):
            return cls.from_polynomial(f)
        if isinstance(f, ExpPoly):
            terms = []
            for (c, kappa), p in f.terms.items():
                scale = np.exp(to_complex(kappa))
                terms.append(GaussTerm(p.to_complex() * scale, tuple(to_complex(ci) for ci in c), (0j,) * f.d))
            return cls(f.d, tuple(terms))
        raise TypeError(f"cannot interpret {type(f).__name__} as a Gaussian polynomial")

    def __add__(self, other):
        other = GaussPoly.coerce(other)
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        return GaussPoly(self.d, self.terms + other.terms)

    def __neg__(self):
        return GaussPoly(self.d, tuple(GaussTerm(-t.poly, t.linear, t.quad) for t in self.terms))

    def __sub__(self, other):
        return self + (-GaussPoly.coerce(other))

    def scale(self, s) -> "GaussPoly":
        return GaussPoly(self.d, tuple(GaussTerm(t.poly * complex(s), t.linear, t.quad) for t in self.terms))

    def evaluate(self, points) -> np.ndarray:
        """Values at ``points`` of shape ``(N, d)`` (complex points allowed)."""
        pts = np.asarray(points, dtype=complex).reshape(-1, self.d)
        out = np.zeros(pts.shape[0], dtype=complex)
        for t in self.terms:
            expo = pts @ t.linear_coeffs + (pts**2) @ np.asarray(t.quad, dtype=complex)
            out += t.poly.evaluate(pts) * np.exp(expo)
        return out

    def __call__(self, x):
        return complex(self.evaluate(np.asarray(x, dtype=complex)[None, :])[0])

    def to_json(self) -> dict:
        terms = []
        for t in self.terms:
            body = t.poly.to_json()["terms"]
            terms.append(
                {
                    "poly": body,
                    "linear_exp": [[complex(v).real, complex(v).imag] for v in t.linear],
                    "quad_exp": [[complex(v).real, complex(v).imag] for v in t.quad],
                }
            )
        out = {"d": self.d, "terms": terms}
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, data) -> "GaussPoly":
        d = int(data["d"])
        terms = []
        for t in data["terms"]:
            p = Polynomial.from_json({"d": d, "terms": t["poly"]})
            terms.append(
                GaussTerm(p, tuple(complex(*v) for v in t["linear_exp"]), tuple(complex(*v) for v in t["quad_exp"]))
            )
        return cls(d, tuple(terms), dict(data.get("meta", {})))


# generator -------------------------------------------------------------------


def generator_apply(f: Polynomial) -> Polynomial:
    """Exact ``A f = -sum_m (x_m + d_m)^2 f``."""
    out = Polynomial(f.d)
    for m in range(f.d):
        x = Polynomial.variable(f.d, m, 1)
        g = x * f + f.diff(m)
        out = out - (x * g + g.diff(m))
    return out


def _raise_term(t: GaussTerm, m: int) -> Polynomial:
    # (x_m + d_m)(p e^E) = (x_m p + d_m p + (L_m + 2 q_m x_m) p) e^E
    d = t.poly.d
    L = complex(t.linear_coeffs[m])
    q = complex(t.quad[m])
    x = Polynomial.variable(d, m, 1.0 + 0j)
    return x * t.poly * (1 + 2 * q) + t.poly.diff(m) + t.poly * L


def generator_apply_gauss(g) -> GaussPoly:
    """``A`` extended termwise to :class:`GaussPoly` by exact differentiation."""
    g = GaussPoly.coerce(g)
    terms = []
    for t in g.terms:
        total = Polynomial(g.d)
        for m in range(g.d):
            once = GaussTerm(_raise_term(t, m), t.linear, t.quad)
            total = total - _raise_term(once, m)
        terms.append(GaussTerm(total, t.linear, t.quad))
    return GaussPoly(g.d, tuple(terms))


# Weyl average ----------------------------------------------------------------


def weyl_gaussian_op(f, xi, sign: int = 1) -> GaussPoly:
    """``W_xi f = exp(-|xi|^2/2) exp(sign * i xi.x) f(x + i xi)`` built from the Weyl operators.

    ``sign=+1`` is the composition ``M_{-i xi} T_{i xi}`` (the linear form of
    ``-i xi`` is ``i xi.x`` for real ``xi``); ``sign=-1`` flips the phase.
    """
    xi = [Fraction(float(v)) for v in xi]
    ef = ExpPoly.coerce(f if isinstance(f, (Polynomial, ExpPoly)) else f)
    a = [exact(complex(0, float(v))) for v in xi]
    b = [exact(complex(0, -sign * float(v))) for v in xi]
    out = mult_exp_op(shift_op(ef, a), b).scale_exp(exact(-sum(v * v for v in xi) / 2))
    return GaussPoly.coerce(out)


def _weyl_integrand(f: GaussPoly, xi: np.ndarray, pts: np.ndarray, sign: int = 1) -> np.ndarray:
    """``W_xi f`` at ``pts`` for each node row of ``xi``; shape ``(nodes, N)``."""
    shifted = pts[None, :, :] + 1j * xi[:, None, :]
    vals = f.evaluate(shifted.reshape(-1, f.d)).reshape(xi.shape[0], pts.shape[0])
    phase = np.exp(sign * 1j * (xi @ pts.T) - 0.5 * np.sum(xi**2, axis=1)[:, None])
    return phase * vals


# moments ---------------------------------------------------------------------


def gaussian_moment(k: int, r):
    """``(4 pi r)^{-1/2} int exp(-xi^2/4r) xi^{2k} d xi = r^k (2k)!/k!``.

    Exact when ``r`` is an integer or :class:`~fractions.Fraction`.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    coef = Fraction(factorial(2 * k), factorial(k))
    if k >= 1 and coef != 2 * Fraction(factorial(2 * k - 1), factorial(k - 1)):
        raise ArithmeticError("moment product form mismatch")
    if isinstance(r, (int, Fraction)):
        return Fraction(r) ** k * coef
    return float(r) ** k * float(coef)


def gaussian_moment_quadrature(k: int, r: float, nodes: int = 40) -> float:
    y, w = np.polynomial.hermite.hermgauss(nodes)
    xi = 2.0 * math.sqrt(r) * y
    return float(np.sum(w * xi ** (2 * k)) / math.sqrt(math.pi))


def gaussian_multimoment(alpha, r):
    """``E[prod xi_m^{2 alpha_m}]`` for independent coordinates, with the product form.

    Returns ``(value, product_form, exponent_of_r)``; the product form is
    ``2^eta r^{|alpha|} prod_{alpha_m > 0} (2 alpha_m - 1)!/(alpha_m - 1)!``.
    """
    value = 1
    for a in alpha:
        value = value * gaussian_moment(a, r)
    support = [a for a in alpha if a]
    pf = Fraction(2 ** len(support))
    for a in support:
        pf *= Fraction(factorial(2 * a - 1), factorial(a - 1))
    n = sum(alpha)
    pf = pf * (Fraction(r) ** n if isinstance(r, (int, Fraction)) else 1)
    if not isinstance(r, (int, Fraction)):
        pf = float(pf) * float(r) ** n
    return value, pf, n


# closed form -----------------------------------------------------------------


def _closed_form_term(t: GaussTerm, r: float) -> GaussTerm:
    d = t.poly.d
    q = np.asarray(t.quad, dtype=complex)
    L = t.linear_coeffs
    S = 1.0 / (4.0 * r) + 0.5 + q
    if np.any(S.real <= 0):
        raise ValueError("Gaussian integral diverges: effective quadratic form not positive")
    norm = (4.0 * math.pi * r) ** -0.5
    # u_m = B_m / (2 S_m) with B_m = i((1 + 2 q_m) x_m + L_m), linear in x_m
    u = [
        Polynomial(d, {tuple(int(j == m) for j in range(d)): 1j * (1 + 2 * q[m]) / (2 * S[m])})
        + 1j * L[m] / (2 * S[m])
        for m in range(d)
    ]
    root = np.sqrt(np.pi / S)
    const = complex(np.prod(norm * root) * np.exp(np.sum(-(L**2) / (4 * S))))

    def even_moment(j, m):
        # int exp(-S eta^2) eta^j / int exp(-S eta^2)
        if j % 2:
            return 0.0
        return math.prod(range(j - 1, 0, -2)) / (2 * S[m]) ** (j // 2)

    deg = t.poly.degree
    result = Polynomial(d)
    derivs = {(0,) * d: t.poly}
    for beta_ in multi_indices(d, deg):
        if beta_ not in derivs:
            i = next(k for k, b in enumerate(beta_) if b)
            prev = list(beta_)
            prev[i] -= 1
            derivs[beta_] = derivs[tuple(prev)].diff(i)
        dp = derivs[beta_]
        if dp.is_zero:
            continue
        factor = Polynomial.constant(d, (1j) ** sum(beta_) / alpha_factorial(beta_))
        for m, k in enumerate(beta_):
            gk = Polynomial(d)
            for j in range(0, k + 1, 2):
                um = Polynomial.constant(d, 1.0 + 0j)
                for _ in range(k - j):
                    um = um * u[m]
                gk = gk + um * (comb(k, j) * even_moment(j, m))
            factor = factor * gk
        result = result + dp * factor
    new_q = q - (1 + 2 * q) ** 2 / (4 * S)
    new_L = L - (1 + 2 * q) * L / (2 * S)
    return GaussTerm(result * const, tuple(np.conj(new_L).tolist()), tuple(new_q.tolist()))


def heat_one_closed_form(r: float, d: int = 1) -> GaussPoly:
    """``G_r 1 = (1+2r)^{-d/2} exp(-r |x|^2 / (1+2r))`` written out directly."""
    p = Polynomial.constant(d, complex((1 + 2 * r) ** (-d / 2)))
    return GaussPoly(d, (GaussTerm(p, (0j,) * d, (complex(-r / (1 + 2 * r)),) * d),))


# quadrature ------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureField:
    """``G_r f`` evaluated pointwise by tensor Gauss-Hermite quadrature."""

    f: GaussPoly
    r: float
    nodes: int
    sign: int = 1

    @property
    def d(self):
        return self.f.d

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex).reshape(-1, self.d)
        y, w = np.polynomial.hermite.hermgauss(self.nodes)
        # weight exp(-s0 xi^2) absorbs both the heat kernel and exp(-xi^2/2)
        s0 = 1.0 / (4.0 * self.r) + 0.5
        scale = 1.0 / math.sqrt(s0)
        grid = np.array(list(itertools.product(y, repeat=self.d))) * scale
        weights = np.prod(np.array(list(itertools.product(w, repeat=self.d))), axis=1)
        # W_xi carries exp(-xi^2/2); it is already inside the weight, so add it back here
        vals = _weyl_integrand(self.f, grid, pts, self.sign) * np.exp(0.5 * np.sum(grid**2, axis=1))[:, None]
        norm = ((4.0 * math.pi * self.r) ** -0.5 * scale) ** self.d
        return norm * (weights @ vals)

    def __call__(self, x):
        return complex(self.evaluate(np.asarray(x, dtype=complex)[None, :])[0])


# semigroup -------------------------------------------------------------------


def _series(f: Polynomial, r: float, order: int) -> GaussPoly:
    if order > SERIES_MAX_ORDER or f.degree + 2 * order > SERIES_MAX_DEGREE:
        raise SeriesBudgetError(
            f"series order {order} on degree {f.degree} exceeds budget "
            f"(order <= {SERIES_MAX_ORDER}, degree <= {SERIES_MAX_DEGREE})"
        )
    total = f.to_complex()
    last = f
    for k in range(1, order + 1):
        last = generator_apply(last)
        total = total + last.to_complex() * (r**k / factorial(k))
    grid = evaluation_grid(f.d)
    last_mag = float(np.max(np.abs(last.to_complex().evaluate(grid)))) * r**order / factorial(order)
    out = GaussPoly.from_polynomial(total)
    return GaussPoly(out.d, out.terms, {"method": "series", "order": order, "last_term_max": last_mag})


def heat_semigroup(f, r: float, method: str = "closed_form", nodes: int = DEFAULT_NODES, order: int = 12):
    """``G_r f`` by ``closed_form`` (a :class:`GaussPoly`), ``quadrature``
    (a :class:`QuadratureField`) or ``series`` (a :class:`GaussPoly` with
    truncation order and last-term size in ``meta``).

    Raises
    ------
    InsufficientQuadratureError
        When ``nodes`` cannot integrate the polynomial part exactly.
    SeriesBudgetError
        When the series order or resulting degree exceeds the budget.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if method == "closed_form":
        g = GaussPoly.coerce(f)
        return GaussPoly(g.d, tuple(_closed_form_term(t, r) for t in g.terms), {"method": "closed_form", "r": r})
    if method == "quadrature":
        g = GaussPoly.coerce(f)
        deg = max((t.poly.degree for t in g.terms), default=0)
        if 2 * nodes - 1 < deg:
            raise InsufficientQuadratureError(
                f"insufficient quadrature order: {nodes} nodes integrate degree {2 * nodes - 1} < {deg}"
            )
        return QuadratureField(g, r, nodes)
    if method == "series":
        if not isinstance(f, Polynomial):
            raise TypeError("series method needs a Polynomial")
        return _series(f, r, order)
    raise ValueError(f"unknown method {method!r}")


# verification ----------------------------------------------------------------


def evaluation_grid(d: int, points: int = 5, bound: float = 2.0) -> np.ndarray:
    axis = np.linspace(-bound, bound, points)
    return np.array(list(itertools.product(axis, repeat=d)), dtype=complex)


def _sup(values) -> float:
    return float(np.max(np.abs(values)))


def evolution_checks(f, r: float, s: float, dr: float = 1e-3) -> dict:
    """Semigroup, PDE and initial-condition residuals on the 5^d grid over [-2, 2]^d."""
    g = GaussPoly.coerce(f)
    grid = evaluation_grid(g.d)
    gr = heat_semigroup(g, r)
    semigroup = _sup(heat_semigroup(gr, s).evaluate(grid) - heat_semigroup(g, r + s).evaluate(grid))
    central = (heat_semigroup(g, r + dr).evaluate(grid) - heat_semigroup(g, r - dr).evaluate(grid)) / (2 * dr)
    pde = _sup(central - generator_apply_gauss(gr).evaluate(grid))
    initial = _sup(heat_semigroup(g, dr).evaluate(grid) - g.evaluate(grid))
    return {"r": r, "s": s, "dr": dr, "semigroup": semigroup, "pde": pde, "initial": initial}


def pde_order(f, r: float, dr: float = 1e-2, halvings: int = 3) -> dict:
    """Observed convergence order of the central-difference PDE residual."""
    res = [evolution_checks(f, r, r, dr / 2**k)["pde"] for k in range(halvings + 1)]
    orders = [math.log2(a / b) for a, b in zip(res, res[1:])]
    return {"residuals": res, "orders": orders, "order": min(orders)}


def generator_at_zero(f, delta: float = 1e-3, levels: int = 3) -> np.ndarray:
    """``d/dr G_r f`` at ``r = 0`` on the grid.

    ``G_r`` is only defined for ``r > 0``, so forward differences at steps
    ``delta / 2^k`` are combined in a Richardson table (error ``O(delta^levels)``).
    """
    g = GaussPoly.coerce(f)
    grid = evaluation_grid(g.d)
    base = g.evaluate(grid)
    table = [(heat_semigroup(g, delta / 2**k).evaluate(grid) - base) / (delta / 2**k) for k in range(levels)]
    for j in range(1, levels):
        table = [(2**j * fine - coarse) / (2**j - 1) for coarse, fine in zip(table, table[1:])]
    return table[0]
