"""Sparse multivariate polynomials in the Hardy variables ``x_i = <h|e_i>``.

Coefficients may be Python complex numbers or exact Gaussian rationals
(``sympy.polys.domains.QQ_I`` elements); every operation here only uses ring
arithmetic, so exact inputs stay exact.
"""

from __future__ import annotations

from itertools import product
from math import comb, factorial

import numpy as np

from ._numbers import conj, exact, is_exact, to_complex

__all__ = ["Polynomial", "multi_indices"]


def multi_indices(d: int, max_degree: int, min_degree: int = 0):
    """All exponent vectors in ``d`` variables with degree in ``[min_degree, max_degree]``."""
    for alpha in product(range(max_degree + 1), repeat=d):
        if min_degree <= sum(alpha) <= max_degree:
            yield alpha


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Finite mapping ``exponent vector -> coefficient``; zero terms are never stored."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d: int, coeffs=None):
        if d < 0:
            raise ValueError("dimension must be non-negative")
        self.d = d
        clean = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != d or any(a < 0 for a in alpha):
                raise ValueError(f"bad exponent {alpha} for d={d}")
            if c:
                clean[alpha] = c
        self.coeffs = clean

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, d, c=1):
        return cls(d, {(0,) * d: c})

    @classmethod
    def variable(cls, d, i, c=1):
        """``c * x_i`` (zero-based ``i``)."""
        alpha = [0] * d
        alpha[i] = 1
        return cls(d, {tuple(alpha): c})

    @classmethod
    def monomial(cls, alpha, c=1):
        return cls(len(alpha), {tuple(alpha): c})

    @classmethod
    def linear_form(cls, b):
        """The Hardy function ``b*(h) = <h|b> = sum conj(b_i) x_i``."""
        d = len(b)
        return cls(d, {tuple(int(j == i) for j in range(d)): conj(bi) for i, bi in enumerate(b)})

    # properties -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __iter__(self):
        return iter(self.coeffs.items())

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other):
        if other.d != self.d:
            raise ValueError(f"dimension mismatch: {self.d} != {other.d}")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.d, other)
        self._check(other)
        out = dict(self.coeffs)
        for alpha, c in other.coeffs.items():
            out[alpha] = out[alpha] + c if alpha in out else c
        return Polynomial(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.d, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.d, {a: c * other for a, c in self.coeffs.items()})
        self._check(other)
        out: dict = {}
        for a, c in self.coeffs.items():
            for b, e in other.coeffs.items():
                k = _mono_mul(a, b)
                out[k] = out[k] + c * e if k in out else c * e
        return Polynomial(self.d, out)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.d == other.d and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.d, frozenset(self.coeffs.items())))

    def map_coeffs(self, fn):
        return Polynomial(self.d, {a: fn(c) for a, c in self.coeffs.items()})

    def exact(self):
        return self.map_coeffs(exact)

    def to_complex(self):
        return self.map_coeffs(to_complex)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs.values())

    # calculus -------------------------------------------------------------

    def diff(self, i: int):
        """Partial derivative in ``x_i`` (zero-based)."""
        out = {}
        for a, c in self.coeffs.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                out[tuple(b)] = c * a[i]
        return Polynomial(self.d, out)

    def directional(self, a):
        """``d/dz p(x + z a)`` at ``z = 0``."""
        out = Polynomial(self.d)
        for i, ai in enumerate(a):
            if ai:
                out = out + self.diff(i) * ai
        return out

    def translate(self, a):
        """``x -> p(x + a)``, expanded binomially per coordinate."""
        if len(a) != self.d:
            raise ValueError("shift dimension mismatch")
        out: dict = {}
        for alpha, c in self.coeffs.items():
            partial = {(): c}
            for i, k in enumerate(alpha):
                nxt = {}
                ai = a[i]
                for head, v in partial.items():
                    if k == 0 or not ai:
                        nxt[head + (k,)] = v
                        continue
                    for j in range(k + 1):
                        w = v * comb(k, j) * ai ** (k - j)
                        key = head + (j,)
                        nxt[key] = nxt[key] + w if key in nxt else w
                partial = nxt
            for key, v in partial.items():
                out[key] = out[key] + v if key in out else v
        return Polynomial(self.d, out)

    def scale_variables(self, s):
        """``x -> p(s_1 x_1, ..., s_d x_d)``."""
        out = {}
        for alpha, c in self.coeffs.items():
            f = c
            for si, k in zip(s, alpha):
                if k:
                    f = f * si**k
            out[alpha] = f
        return Polynomial(self.d, out)

    # evaluation -----------------------------------------------------------

    def __call__(self, x):
        total = 0
        for alpha, c in self.coeffs.items():
            term = c
            for xi, k in zip(x, alpha):
                if k:
                    term = term * xi**k
            total = total + term
        return total

    def evaluate(self, points) -> np.ndarray:
        """Vectorised evaluation at ``points`` of shape ``(N, d)``."""
        pts = np.asarray(points, dtype=complex).reshape(-1, self.d)
        out = np.zeros(pts.shape[0], dtype=complex)
        for alpha, c in self.coeffs.items():
            out += to_complex(c) * np.prod(pts ** np.array(alpha), axis=1)
        return out

    # interchange ----------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for alpha in sorted(self.coeffs):
            z = to_complex(self.coeffs[alpha])
            terms.append({"alpha": list(alpha), "re": z.real, "im": z.imag})
        return {"d": self.d, "terms": terms}

    @classmethod
    def from_json(cls, data: dict):
        d = int(data["d"])
        coeffs = {}
        for t in data["terms"]:
            alpha = tuple(t["alpha"])
            coeffs[alpha] = coeffs.get(alpha, 0) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(d, coeffs)

    def to_sympy(self, xs):
        import sympy

        expr = sympy.Integer(0)
        for alpha, c in self.coeffs.items():
            if is_exact(c):
                ce = exact(c)
                coeff = sympy.Rational(ce.x) + sympy.I * sympy.Rational(ce.y)
            else:
                coeff = sympy.sympify(complex(c))
            expr += coeff * sympy.Mul(*[x**k for x, k in zip(xs, alpha)])
        return expr

    def __repr__(self):
        if not self.coeffs:
            return f"Polynomial(d={self.d}, 0)"
        parts = []
        for alpha in sorted(self.coeffs, reverse=True):
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(alpha) if k)
            parts.append(f"({self.coeffs[alpha]})" + (f"*{mono}" if mono else ""))
        return f"Polynomial(d={self.d}, " + " + ".join(parts) + ")"


def alpha_factorial(alpha) -> int:
    out = 1
    for k in alpha:
        out *= factorial(k)
    return out
