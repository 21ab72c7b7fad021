"""Weighted Hardy space of polynomials in ``d`` complex variables.

The monomial ``x^alpha`` has squared norm ``beta_lambda * lambda!`` where
``lambda`` is ``alpha`` with zeros dropped and sorted descending, and
``beta_lambda = (eta-1)!/(eta-1+n)!`` with ``eta`` the support size.  An
alternative convention counts ``eta`` as the ambient dimension ``m`` (zero
exponents included); both are exposed through ``convention``.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numbers import conj, to_complex
from .combinatorics import Partition, Tabloid, beta
from .haar import pw_field, pw_field_conj, pw_monomial
from .montecarlo import Estimate, VirtualSampler, mc_integrate, mc_integrate_many
from .polynomial import Polynomial, alpha_factorial, multi_indices

__all__ = [
    "WeightTable",
    "WEIGHTS",
    "monomial_weight",
    "weighted_inner",
    "weighted_norm_sq",
    "coherent_truncate",
    "coherent_norm_partial_sums",
    "FourierSpec",
    "fourier_mc",
    "fourier_taylor_fit",
    "taylor_coefficient_check",
    "weight_convention_table",
]

CONVENTIONS = ("support", "ambient")


def partition_of(alpha) -> Partition:
    return Partition(sorted((a for a in alpha if a), reverse=True))


class WeightTable:
    """Thread-safe memo of ``(eta, n, lambda) -> beta * lambda!``.

    Concurrent fills compute the same exact value, so a race only repeats work.
    """

    def __init__(self):
        self._cache: dict = {}
        self._lock = threading.Lock()

    def get(self, eta: int, lam: Partition) -> Fraction:
        key = (eta, lam.weight, tuple(lam))
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        value = Fraction(math.factorial(eta - 1) * lam.factorial(), math.factorial(eta - 1 + lam.weight))
        with self._lock:
            self._cache.setdefault(key, value)
        return value

    def __len__(self):
        return len(self._cache)


WEIGHTS = WeightTable()


def monomial_weight(alpha, convention: str = "support", m: int | None = None) -> Fraction:
    """Squared norm of ``x^alpha``.

    ``convention="support"`` uses ``eta = #nonzero exponents``;
    ``convention="ambient"`` uses ``eta = m`` (default ``len(alpha)``).
    The zero multi-index has weight 1 in both.
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be non-negative")
    lam = partition_of(alpha)
    if not lam:
        return Fraction(1)
    if convention == "support":
        eta = lam.length
    elif convention == "ambient":
        eta = len(alpha) if m is None else int(m)
        if eta < lam.length:
            raise ValueError(f"ambient dimension {eta} smaller than support {lam.length}")
    else:
        raise ValueError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")
    return WEIGHTS.get(eta, lam)


def weighted_inner(p: Polynomial, q: Polynomial, convention: str = "support", m: int | None = None):
    """``sum_alpha p_alpha conj(q_alpha) w(alpha)``; linear in ``p``."""
    if p.d != q.d:
        raise ValueError(f"dimension mismatch: {p.d} != {q.d}")
    total = 0
    for alpha, c in p.coeffs.items():
        e = q.coeffs.get(alpha)
        if e is not None:
            w = monomial_weight(alpha, convention, m)
            if isinstance(c, complex) or isinstance(e, complex):
                w = float(w)
            total = total + c * conj(e) * w
    return total


def weighted_norm_sq(p: Polynomial, convention: str = "support", m: int | None = None) -> float:
    return float(to_complex(weighted_inner(p, p, convention, m)).real)


def coherent_truncate(h, N: int) -> Polynomial:
    """Degree-``N`` truncation of ``exp<x|h>``: coefficients ``conj(h)^alpha / alpha!``."""
    if N < 0:
        raise ValueError("degree cap must be non-negative")
    hc = [conj(complex(v)) for v in h]
    d = len(hc)
    coeffs = {}
    for alpha in multi_indices(d, N):
        c = complex(1.0)
        for v, k in zip(hc, alpha):
            c *= v**k
        coeffs[alpha] = c / alpha_factorial(alpha)
    return Polynomial(d, coeffs)


def coherent_norm_partial_sums(h, N: int, convention: str = "support"):
    """Per-degree partial sums of the coherent-state norm.

    Returns a list of dicts with keys ``n``, ``unweighted`` (``sum |c|^2 alpha!``,
    which telescopes to ``sum_k ||h||^(2k)/k!``), ``weighted`` (monomial
    weights ``beta * lambda!``) and ``tail`` (``e^{||h||^2}`` minus the
    unweighted sum, computed from the series remainder).
    """
    p = coherent_truncate(h, N)
    norm2 = float(sum(abs(complex(v)) ** 2 for v in h))
    by_degree_u = [0.0] * (N + 1)
    by_degree_w = [0.0] * (N + 1)
    for alpha, c in p.coeffs.items():
        n = sum(alpha)
        a2 = abs(c) ** 2
        by_degree_u[n] += a2 * alpha_factorial(alpha)
        by_degree_w[n] += a2 * float(monomial_weight(alpha, convention))
    rows = []
    su = sw = 0.0
    for n in range(N + 1):
        su += by_degree_u[n]
        sw += by_degree_w[n]
        rows.append(
            {
                "n": n,
                "unweighted": su,
                "weighted": sw,
                "tail": _exp_tail(norm2, n),
                "limit": math.exp(norm2),
            }
        )
    return rows


def _exp_tail(x: float, n: int) -> float:
    """``sum_{k>n} x^k / k!`` summed directly (no cancellation)."""
    term = x ** (n + 1) / math.factorial(n + 1)
    total, k = 0.0, n + 1
    while term > 1e-300 and (total == 0 or term > total * 1e-18):
        total += term
        k += 1
        term *= x / k
    return total


# Fourier transform ----------------------------------------------------------


@dataclass(frozen=True)
class FourierSpec:
    """Finite combination ``f = sum_k c_k phi^{lambda_k}_{i_k}``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(c), t if isinstance(t, Tabloid) else Tabloid.parse(t)) for c, t in self.terms)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text: str) -> "FourierSpec":
        """``"1:1"`` or ``"0.5*1:1 + 2*1,2:1,1"`` (coefficient defaults to 1)."""
        terms = []
        # "+" inside a parenthesised complex coefficient does not split terms
        for chunk in re.split(r"\+(?![^(]*\))", text):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "*" in chunk:
                c, tab = chunk.split("*", 1)
                terms.append((complex(c.strip().replace(" ", "")), tab.strip()))
            else:
                terms.append((1.0, chunk))
        return cls(tuple(terms))

    @property
    def level(self) -> int:
        return max((t.levels for _, t in self.terms), default=1) or 1

    @property
    def degree(self) -> int:
        return max((t.weight for _, t in self.terms), default=0)

    def component(self, n: int) -> "FourierSpec":
        return FourierSpec(tuple((c, t) for c, t in self.terms if t.weight == n))

    def evaluate(self, s):
        out = 0
        for c, t in self.terms:
            out = out + c * pw_monomial(s, t)
        if np.isscalar(out) and s.batch_size is not None:
            out = np.full(s.batch_size, out, dtype=complex)
        return out

    def single_level(self) -> int | None:
        """The common level index if every term lives on one coordinate."""
        idx = {t.alphabet for _, t in self.terms if t.alphabet}
        if len(idx) == 1:
            (alph,) = idx
            if len(alph) == 1:
                return alph[0]
        return None

    def __str__(self):
        return " + ".join(t_str if c == 1 else f"{_coef_str(c)}*{t_str}"
                          for c, t_str in ((c, str(t) or ":") for c, t in self.terms))


def _coef_str(c: complex) -> str:
    return repr(c.real) if c.imag == 0 else f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j)"


def fourier_mc(f_spec: FourierSpec, h, n: int, rng, form: str = "conjugate", level: int | None = None) -> Estimate:
    """Monte Carlo value of ``f^(h)``.

    ``form="conjugate"`` integrates ``exp(sum conj(phi_i) h_i) f``;
    ``form="real"`` integrates ``exp(2 Re phi_h - ||h||^2) f``.
    """
    h = np.asarray(h, dtype=complex)
    M = max(level or 1, f_spec.level, len(h))
    norm2 = float(np.vdot(h, h).real)

    if form == "conjugate":
        def obs(s):
            return np.exp(pw_field_conj(s, h)) * f_spec.evaluate(s)
    elif form == "real":
        def obs(s):
            return np.exp(2 * pw_field(s, h).real - norm2) * f_spec.evaluate(s)
    else:
        raise ValueError("form must be 'conjugate' or 'real'")
    return mc_integrate(obs, VirtualSampler(M), n, rng)


@dataclass(frozen=True)
class TaylorFit:
    """Monte Carlo Taylor coefficients of ``f^`` plus ``||f||^2`` from the same draws."""

    polynomial: Polynomial
    coefficients: dict
    norm_sq: Estimate


def fourier_taylor_fit(f_spec: FourierSpec, n: int, rng, degree: int | None = None,
                       level: int | None = None) -> TaylorFit:
    """Estimate ``c_alpha = E[f conj(phi)^alpha] / alpha!`` for ``|alpha| <= degree``."""
    M = max(level or 1, f_spec.level)
    N = f_spec.degree if degree is None else degree
    alphas = list(multi_indices(M, N))
    facts = np.array([alpha_factorial(a) for a in alphas], dtype=float)
    expo = np.array(alphas, dtype=int)

    def obs(s):
        f = f_spec.evaluate(s)
        phic = np.conj(s.phis())
        mons = np.prod(phic[:, None, :] ** expo[None, :, :], axis=-1)
        return np.column_stack([np.abs(f) ** 2, f[:, None] * mons / facts])

    ests = mc_integrate_many(obs, VirtualSampler(M), n, rng, 1 + len(alphas))
    coeffs = {a: e for a, e in zip(alphas, ests[1:])}
    poly = Polynomial(M, {a: e.mean for a, e in coeffs.items()})
    return TaylorFit(poly, coeffs, ests[0])


def taylor_coefficient_check(f_spec: FourierSpec, x, nmax: int, n: int, rng):
    """Degree-``k`` derivatives of ``f^`` along ``x`` in two forms, same draws.

    Column ``full_k`` is ``E[f conj_phi_x^k]`` (the derivative of the integral);
    column ``component_k`` is ``E[f_k conj_phi_x^k]`` with ``f_k`` the
    degree-``k`` part of ``f``.
    """
    x = np.asarray(x, dtype=complex)
    M = max(f_spec.level, len(x))
    comps = [f_spec.component(k) for k in range(nmax + 1)]

    def obs(s):
        px = pw_field_conj(s, x)
        f = f_spec.evaluate(s)
        cols = []
        for k in range(nmax + 1):
            cols.append(f * px**k)
            cols.append(comps[k].evaluate(s) * px**k if comps[k].terms else np.zeros_like(px))
        return np.column_stack(cols)

    ests = mc_integrate_many(obs, VirtualSampler(M), n, rng, 2 * (nmax + 1))
    return [{"k": k, "full": ests[2 * k], "component": ests[2 * k + 1]} for k in range(nmax + 1)]


def weight_convention_table(max_degree: int, m: int):
    """Support-size and ambient-``m`` weights side by side for all ``|alpha| <= max_degree``."""
    rows = []
    for alpha in multi_indices(m, max_degree, 1):
        rows.append(
            {
                "alpha": list(alpha),
                "support": monomial_weight(alpha, "support"),
                "ambient": monomial_weight(alpha, "ambient", m),
            }
        )
    return rows
