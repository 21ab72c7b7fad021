"""Partitions, tableaux, hook lengths and Schur polynomials.

Exact quantities (``syt_count``, ``beta``, Frobenius coefficients) use Python
integers and :class:`fractions.Fraction`; floating point only appears when a
Schur polynomial is evaluated at numeric points.

Canonical partition order is lexicographic descending, e.g. for n = 3::

    (3,), (2, 1), (1, 1, 1)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, prod

import numpy as np

__all__ = [
    "Partition",
    "Alphabet",
    "Tabloid",
    "SemistandardTableau",
    "DegenerateVandermondeError",
    "SymbolicBudgetError",
    "partitions_of",
    "hook_lengths",
    "syt_count",
    "standard_tableaux",
    "beta",
    "ssyt_list",
    "schur_eval",
    "complete_homogeneous",
    "frobenius_coefficients",
    "well_separated_points",
]

SCHUR_METHODS = ("bialternant", "tableau_sum", "jacobi_trudi")

# refuse the bialternant when min|t_i - t_j| < BIALTERNANT_SEPARATION * max|t_i|
BIALTERNANT_SEPARATION = 1e-6


class DegenerateVandermondeError(ValueError):
    """Evaluation points too close for the bialternant ratio."""


class SymbolicBudgetError(ValueError):
    """Requested symbolic expansion exceeds the configured bound."""


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        for p in parts:
            if p < 1:
                raise ValueError(f"partition parts must be positive: {parts}")
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"partition {parts} is not weakly decreasing")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def cells(self):
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def factorial(self) -> int:
        """``lambda! = lambda_1! ... lambda_eta!``."""
        return prod(factorial(p) for p in self)

    def __repr__(self):
        return f"Partition({tuple(self)})"

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")"


class Alphabet(tuple):
    """Strictly increasing tuple of positive coordinate indices."""

    def __new__(cls, indices=()):
        indices = tuple(int(i) for i in indices)
        if any(i < 1 for i in indices):
            raise ValueError(f"alphabet indices must be positive: {indices}")
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise ValueError(f"alphabet {indices} is not strictly increasing")
        return super().__new__(cls, indices)


@dataclass(frozen=True)
class Tabloid:
    """A partition paired with an alphabet of the same length (``i^lambda``)."""

    alphabet: Alphabet
    partition: Partition

    def __post_init__(self):
        object.__setattr__(self, "alphabet", Alphabet(self.alphabet))
        object.__setattr__(self, "partition", Partition(self.partition))
        if len(self.alphabet) != len(self.partition):
            raise ValueError("alphabet and partition must have equal length")

    @property
    def weight(self) -> int:
        return self.partition.weight

    @property
    def levels(self) -> int:
        """Highest coordinate index used (0 for the empty tabloid)."""
        return self.alphabet[-1] if self.alphabet else 0

    @classmethod
    def parse(cls, text: str) -> "Tabloid":
        """Parse ``"1,2:1,1"`` (alphabet, then partition)."""
        text = text.strip()
        if not text or text == ":":
            return cls(Alphabet(), Partition())
        try:
            left, right = text.split(":")
            alphabet = [int(x) for x in left.split(",") if x.strip()]
            parts = [int(x) for x in right.split(",") if x.strip()]
        except ValueError as exc:
            raise ValueError(f"bad tabloid {text!r}; expected 'i1,i2:l1,l2'") from exc
        return cls(Alphabet(alphabet), Partition(parts))

    def __str__(self):
        return ",".join(map(str, self.alphabet)) + ":" + ",".join(map(str, self.partition))

    def exponents(self, d: int) -> tuple[int, ...]:
        """Exponent vector over ``d`` ambient coordinates."""
        if self.levels > d:
            raise ValueError(f"tabloid {self} exceeds ambient dimension {d}")
        alpha = [0] * d
        for i, p in zip(self.alphabet, self.partition):
            alpha[i - 1] = p
        return tuple(alpha)


@dataclass(frozen=True)
class SemistandardTableau:
    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if tuple(len(r) for r in self.rows) != tuple(self.shape):
            raise ValueError("rows do not match shape")
        for r in self.rows:
            if any(a > b for a, b in zip(r, r[1:])):
                raise ValueError("rows must weakly increase")
        for upper, lower in zip(self.rows, self.rows[1:]):
            if any(lower[j] <= upper[j] for j in range(len(lower))):
                raise ValueError("columns must strictly increase")

    def monomial(self, d: int) -> tuple[int, ...]:
        """Exponent vector ``x^T`` in ``d`` variables."""
        alpha = [0] * d
        for r in self.rows:
            for v in r:
                alpha[v - 1] += 1
        return tuple(alpha)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in lexicographic descending order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(Partition(acc))
            return
        for k in range(min(remaining, largest), 0, -1):
            acc.append(k)
            rec(remaining - k, k, acc)
            acc.pop()

    rec(n, n, [])
    return out


def hook_lengths(lam) -> list[int]:
    lam = Partition(lam)
    conj = lam.conjugate()
    return [lam[i] - j + conj[j] - i - 1 for i, j in lam.cells()]


def syt_count(lam) -> int:
    """Number of standard Young tableaux, ``n! / prod(hooks)``.

    The empty partition has exactly one (empty) filling.
    """
    lam = Partition(lam)
    n = lam.weight
    h = prod(hook_lengths(lam))
    q, r = divmod(factorial(n), h)
    assert r == 0
    return q


def standard_tableaux(lam) -> list[tuple[tuple[int, ...], ...]]:
    """Explicit enumeration of standard tableaux of shape ``lam``.

    Entries 1..n are placed one at a time into addable cells, so every
    tableau is produced exactly once. Independent of the hook formula.
    """
    lam = Partition(lam)
    n = lam.weight
    result = []
    rows: list[list[int]] = [[] for _ in lam]

    def rec(k):
        if k > n:
            result.append(tuple(tuple(r) for r in rows))
            return
        for i, target in enumerate(lam):
            if len(rows[i]) < target and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                rec(k + 1)
                rows[i].pop()

    rec(1)
    return result


@lru_cache(maxsize=None)
def _beta(eta: int, n: int) -> Fraction:
    if eta == 0:
        return Fraction(1)
    return Fraction(factorial(eta - 1), factorial(eta - 1 + n))


def beta(lam) -> Fraction:
    """``(eta - 1)! / (eta - 1 + |lambda|)!`` as an exact rational."""
    lam = Partition(lam)
    return _beta(lam.length, lam.weight)


def ssyt_list(lam, d: int) -> list[SemistandardTableau]:
    """All semistandard tableaux of shape ``lam`` with entries in 1..d."""
    lam = Partition(lam)
    if d < 1:
        raise ValueError("d must be >= 1")
    if lam.length > d:
        return []
    cells = list(lam.cells())
    grid: dict[tuple[int, int], int] = {}
    out = []

    def rec(k):
        if k == len(cells):
            rows = tuple(tuple(grid[i, j] for j in range(lam[i])) for i in range(lam.length))
            out.append(SemistandardTableau(lam, rows))
            return
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, grid[i, j - 1])
        if i > 0:
            lo = max(lo, grid[i - 1, j] + 1)
        for v in range(lo, d + 1):
            grid[i, j] = v
            rec(k + 1)
        grid.pop((i, j), None)

    rec(0)
    return out


def complete_homogeneous(t, kmax: int) -> np.ndarray:
    """``[h_0, ..., h_kmax]`` of the points ``t``.

    Adds one variable at a time through ``h_k(t, y) = h_k(t) + y h_{k-1}(t, y)``,
    which avoids the cancellation of Newton's identities.
    """
    t = np.asarray(t, dtype=complex)
    h = np.zeros(t.shape[:-1] + (kmax + 1,), dtype=complex)
    h[..., 0] = 1
    for j in range(t.shape[-1]):
        y = t[..., j]
        for k in range(1, kmax + 1):
            h[..., k] = h[..., k] + y * h[..., k - 1]
    return h


def _schur_jacobi_trudi(lam: Partition, t: np.ndarray) -> np.ndarray:
    eta = lam.length
    if eta == 0:
        return np.ones(t.shape[:-1], dtype=complex)
    kmax = lam[0] + eta - 1
    h = complete_homogeneous(t, kmax)
    mat = np.zeros(t.shape[:-1] + (eta, eta), dtype=complex)
    for i in range(eta):
        for j in range(eta):
            k = lam[i] - i + j
            if 0 <= k <= kmax:
                mat[..., i, j] = h[..., k]
    return np.linalg.det(mat)


def _schur_bialternant(lam: Partition, t: np.ndarray) -> np.ndarray:
    k = t.shape[-1]
    if lam.length > k:
        return np.zeros(t.shape[:-1], dtype=complex)
    if k > 1:
        diffs = np.abs(t[..., :, None] - t[..., None, :])
        diffs = np.where(np.eye(k, dtype=bool), np.inf, diffs)
        scale = np.max(np.abs(t), axis=-1)
        bad = np.min(diffs, axis=(-1, -2)) < BIALTERNANT_SEPARATION * scale
        if np.any(bad):
            raise DegenerateVandermondeError(
                "degenerate Vandermonde: points closer than "
                f"{BIALTERNANT_SEPARATION:g} * max|t|; use tableau_sum or jacobi_trudi"
            )
    parts = list(lam) + [0] * (k - lam.length)
    num_exp = np.array([parts[j] + k - 1 - j for j in range(k)])
    den_exp = np.arange(k - 1, -1, -1)
    num = np.linalg.det(t[..., :, None] ** num_exp)
    den = np.linalg.det(t[..., :, None] ** den_exp)
    return num / den


def _schur_tableau_sum(lam: Partition, t: np.ndarray) -> np.ndarray:
    k = t.shape[-1]
    if k == 0:
        return np.full(t.shape[:-1], 0 if lam else 1, dtype=complex)
    total = np.zeros(t.shape[:-1], dtype=complex)
    for tab in ssyt_list(lam, k):
        total = total + np.prod(t ** np.array(tab.monomial(k)), axis=-1)
    return total


def schur_eval(lam, t, method: str = "jacobi_trudi"):
    """Evaluate ``s_lambda(t)``.

    ``t`` may carry leading batch axes; the last axis indexes variables.
    Returns zero when ``lam`` has more rows than there are variables.

    Raises
    ------
    DegenerateVandermondeError
        For ``method="bialternant"`` when two points nearly coincide.
    """
    lam = Partition(lam)
    arr = np.asarray(t, dtype=complex)
    if arr.ndim == 0:
        arr = arr[None]
    if method not in SCHUR_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {SCHUR_METHODS}")
    if lam.length > arr.shape[-1]:
        out = np.zeros(arr.shape[:-1], dtype=complex)
    elif method == "jacobi_trudi":
        out = _schur_jacobi_trudi(lam, arr)
    elif method == "bialternant":
        out = _schur_bialternant(lam, arr)
    else:
        out = _schur_tableau_sum(lam, arr)
    if out.ndim == 0:
        return complex(out)
    return out


def well_separated_points(rng, n: int, k: int, min_sep: float = 0.2) -> np.ndarray:
    """``n`` rows of ``k`` points with moduli in [0.5, 1.5] and pairwise distance >= ``min_sep``.

    Bounding the moduli away from zero keeps every evaluation method
    well conditioned; the rejection loop enforces separation.
    """
    out = np.empty((n, k), dtype=complex)
    i = 0
    while i < n:
        t = rng.uniform(0.5, 1.5, k) * np.exp(2j * np.pi * rng.random(k))
        gap = np.abs(t[:, None] - t[None, :])
        np.fill_diagonal(gap, np.inf)
        if gap.min() >= min_sep:
            out[i] = t
            i += 1
    return out


FROBENIUS_BOUND = 6


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _schur_symbolic(lam: Partition, xs):
    """Bialternant as an exact sympy polynomial (exact division checked)."""
    import sympy

    k = len(xs)
    if lam.length > k:
        return sympy.Poly(0, *xs)
    parts = list(lam) + [0] * (k - lam.length)

    def alternant(exps):
        # Leibniz expansion; every product is a single monomial
        terms = {}
        for perm in permutations(range(k)):
            mono = [0] * k
            for i, j in enumerate(perm):
                mono[i] = exps[j]
            terms[tuple(mono)] = _perm_sign(perm)
        return sympy.Poly.from_dict(terms, *xs)

    num = alternant([parts[j] + k - 1 - j for j in range(k)])
    den = alternant([k - 1 - j for j in range(k)])
    q, r = sympy.div(num, den)
    if not r.is_zero:
        raise ArithmeticError(f"bialternant for {lam} did not divide exactly")
    return q


def frobenius_coefficients(n: int, bound: int = FROBENIUS_BOUND) -> tuple[dict[Partition, int], bool]:
    """``{lambda |- n: syt_count(lambda)}`` and whether ``p_1^n = sum h_lam s_lam`` holds.

    The identity is checked by exact symbolic expansion in ``min(n, 4)``
    variables, Schur polynomials built as exact bialternant quotients.
    """
    import sympy

    if n < 1:
        raise ValueError("n must be positive")
    if n > bound:
        raise SymbolicBudgetError(f"symbolic budget exceeded: n={n} > bound={bound}")
    coeffs = {lam: syt_count(lam) for lam in partitions_of(n)}
    k = min(n, 4)
    xs = sympy.symbols(f"x1:{k + 1}")
    lhs = sympy.Poly(sum(xs) ** n, *xs)
    rhs = sympy.Poly(0, *xs)
    for lam, c in coeffs.items():
        rhs = rhs + c * _schur_symbolic(lam, xs)
    return coeffs, lhs == rhs
