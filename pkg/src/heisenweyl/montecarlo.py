"""Seeded, shardable Monte Carlo integration and two-sample consistency tests.

Sums are accumulated exactly: every float64 is an integer multiple of
``2**-1126``, so per-shard totals are Python integers and merging shards is
exact integer addition.  The resulting :class:`Estimate` therefore does not
depend on the shard plan or the merge order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from .haar import SeededRng, sample_haar_batch, sample_virtual, livsic_project

__all__ = [
    "Estimate",
    "MomentAccumulator",
    "NonFiniteObservableError",
    "HaarSampler",
    "VirtualSampler",
    "ProjectedSampler",
    "mc_integrate",
    "mc_integrate_many",
    "haar_column_moment_exact",
    "ks_critical_value",
    "ConsistencyReport",
    "consistency_test",
]

_SCALE_BITS = 1126  # 2**-1126 divides every finite float64 (1074 + 52)
_LO_BITS = 27
DEFAULT_CHUNK = 50_000


class NonFiniteObservableError(FloatingPointError):
    def __init__(self, index: int, value):
        self.index = index
        self.value = value
        super().__init__(f"observable returned non-finite value {value!r} at draw {index}")


def _exact_sum(x: np.ndarray) -> int:
    """Exact ``sum(x) * 2**1126`` as a Python integer."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if not x.size:
        return 0
    mant, expo = np.frexp(x)
    ints = (mant * 2.0**53).astype(np.int64)
    hi = ints >> _LO_BITS
    lo = ints - (hi << _LO_BITS)
    keys, inv = np.unique(expo, return_inverse=True)
    # per-exponent partial sums stay below 2**53, hence exact in float64
    shi = np.bincount(inv, weights=hi)
    slo = np.bincount(inv, weights=lo)
    total = 0
    for e, a, b in zip(keys.tolist(), shi.tolist(), slo.tolist()):
        total += ((int(a) << _LO_BITS) + int(b)) << (e - 53 + _SCALE_BITS)
    return total


@dataclass(frozen=True)
class Estimate:
    """Sample mean with standard error ``std / sqrt(n)``."""

    mean: complex
    stderr: float
    n: int
    seed: int

    def to_json(self) -> dict:
        return {
            "mean_re": float(self.mean.real),
            "mean_im": float(self.mean.imag),
            "stderr": float(self.stderr),
            "n": int(self.n),
            "seed": int(self.seed),
        }

    def z_score(self, value) -> float:
        diff = abs(self.mean - complex(value))
        if self.stderr == 0:
            return 0.0 if diff <= 1e-12 else math.inf
        return diff / self.stderr


@dataclass(frozen=True)
class MomentAccumulator:
    """Exact ``(count, sum re, sum im, sum |z|^2)`` in units of ``2**-1126``."""

    n: int = 0
    sum_re: int = 0
    sum_im: int = 0
    sum_sq: int = 0

    @classmethod
    def of(cls, values) -> "MomentAccumulator":
        v = np.asarray(values, dtype=complex).ravel()
        re, im = v.real, v.imag
        return cls(v.size, _exact_sum(re), _exact_sum(im), _exact_sum(re * re + im * im))

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        return MomentAccumulator(
            self.n + other.n,
            self.sum_re + other.sum_re,
            self.sum_im + other.sum_im,
            self.sum_sq + other.sum_sq,
        )

    __add__ = merge

    def estimate(self, seed: int = 0) -> Estimate:
        if self.n < 2:
            raise ValueError("need at least two draws")
        scale = 1 << _SCALE_BITS
        n = self.n
        mre = Fraction(self.sum_re, scale * n)
        mim = Fraction(self.sum_im, scale * n)
        var = (Fraction(self.sum_sq, scale) - n * (mre * mre + mim * mim)) / (n - 1)
        var = max(var, Fraction(0))
        return Estimate(complex(float(mre), float(mim)), math.sqrt(var / n), n, seed)


# samplers --------------------------------------------------------------------


@dataclass(frozen=True)
class HaarSampler:
    """Batches of Haar unitaries on ``U(m)``."""

    m: int

    def draw(self, gen, k):
        return sample_haar_batch(self.m, k, gen)


@dataclass(frozen=True)
class VirtualSampler:
    """Batches of virtual chains truncated at level ``M``."""

    M: int

    def draw(self, gen, k):
        return sample_virtual(self.M, gen, k)


@dataclass(frozen=True)
class ProjectedSampler:
    """``U(m)`` samples obtained by projecting Haar ``U(m+1)`` draws."""

    m: int

    def draw(self, gen, k):
        return livsic_project(sample_haar_batch(self.m + 1, k, gen))


def _shard_sizes(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (j < extra) for j in range(shards)]


def _run_shard(f, sampler, size, gen, offset, chunk, width):
    accs = [MomentAccumulator() for _ in range(width)]
    done = 0
    while done < size:
        k = min(chunk, size - done)
        vals = np.asarray(f(sampler.draw(gen, k)), dtype=complex)
        vals = vals.reshape(k, -1) if vals.ndim > 1 else vals.reshape(k, 1)
        if vals.shape[1] != width:
            raise ValueError(f"observable returned {vals.shape[1]} columns, expected {width}")
        finite = np.isfinite(vals).all(axis=1)
        if not finite.all():
            j = int(np.argmin(finite))
            raise NonFiniteObservableError(offset + done + j, vals[j])
        for c in range(width):
            accs[c] = accs[c].merge(MomentAccumulator.of(vals[:, c]))
        done += k
    return accs


def mc_integrate_many(
    f, sampler, n: int, rng: SeededRng, width: int, shards: int = 1, workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> list[Estimate]:
    """Integrate a vector observable; ``f`` maps a batch of ``k`` draws to ``(k, width)``.

    Shard ``j`` draws from ``rng.generator(j)``; results depend on
    ``(seed, stream, shards)`` only, never on ``workers``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if shards < 1 or workers < 1:
        raise ValueError("shards and workers must be positive")
    sizes = _shard_sizes(n, shards)
    offsets = np.cumsum([0] + sizes[:-1]).tolist()
    jobs = [(sizes[j], rng.generator(j), offsets[j]) for j in range(shards)]
    if workers == 1:
        parts = [_run_shard(f, sampler, s, g, o, chunk, width) for s, g, o in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_shard(f, sampler, *job, chunk, width), jobs))
    totals = parts[0]
    for p in parts[1:]:
        totals = [a.merge(b) for a, b in zip(totals, p)]
    return [acc.estimate(rng.seed) for acc in totals]


def mc_integrate(f, sampler, n: int, rng: SeededRng, shards: int = 1, workers: int = 1,
                 chunk: int = DEFAULT_CHUNK) -> Estimate:
    """Mean and standard error of ``f`` over ``n`` independent draws.

    ``f`` receives a batch (array of unitaries or a batched
    :class:`~heisenweyl.haar.VirtualSample`) and returns one value per draw.

    Raises
    ------
    NonFiniteObservableError
        Carrying the global index of the first offending draw.
    """
    return mc_integrate_many(f, sampler, n, rng, 1, shards, workers, chunk)[0]


def haar_column_moment_exact(eta: int, alpha) -> Fraction:
    """``E[prod |z_k|^(2 alpha_k)]`` for a uniform unit vector in C^eta."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != eta or eta < 1:
        raise ValueError("alpha must have length eta >= 1")
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be non-negative")
    num = math.factorial(eta - 1) * math.prod(math.factorial(a) for a in alpha)
    return Fraction(num, math.factorial(eta - 1 + sum(alpha)))


# consistency -----------------------------------------------------------------

KS_ALPHA = 0.01


def ks_critical_value(n1: int, n2: int, alpha: float = KS_ALPHA) -> float:
    """Asymptotic two-sample Kolmogorov-Smirnov critical distance."""
    c = math.sqrt(-0.5 * math.log(alpha / 2))
    return c * math.sqrt((n1 + n2) / (n1 * n2))


STAT_DECIMALS = 12


def _statistics(u: np.ndarray) -> dict[str, np.ndarray]:
    # rounded to the unitarity tolerance: below it the digits are rounding noise,
    # which would otherwise dominate KS on degenerate laws (|u11|^2 = 1 for m = 1)
    raw = {
        "re_trace": np.trace(u, axis1=-2, axis2=-1).real,
        "abs_u11_sq": np.abs(u[:, 0, 0]) ** 2,
        "arg_det": np.angle(np.linalg.det(u)),
    }
    return {k: np.round(v, STAT_DECIMALS) for k, v in raw.items()}


def _z(x, y):
    se = math.sqrt(x.var(ddof=1) / x.size + y.var(ddof=1) / y.size)
    diff = float(x.mean() - y.mean())
    return 0.0 if se == 0 and diff == 0 else diff / se


@dataclass
class ConsistencyReport:
    m: int
    n: int
    seed: int
    ks_critical: float
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["ks_distance"] < r["ks_critical"] for r in self.rows)

    def to_json(self) -> dict:
        return {
            "kind": "consistency",
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "ks_critical": self.ks_critical,
            "passed": self.passed,
            "rows": self.rows,
        }


def consistency_test(m: int, n: int, rng: SeededRng) -> ConsistencyReport:
    """Compare ``n`` direct Haar ``U(m)`` draws with ``n`` projected ``U(m+1)`` draws."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if n < 1000:
        raise ValueError("consistency test needs n >= 1000 per side")
    direct = sample_haar_batch(m, n, rng.generator(0))
    projected = livsic_project(sample_haar_batch(m + 1, n, rng.generator(1)))
    sd, sp = _statistics(direct), _statistics(projected)
    crit = ks_critical_value(n, n)
    report = ConsistencyReport(m, n, rng.seed, crit)
    for name in sd:
        res = stats.ks_2samp(sd[name], sp[name])
        report.rows.append(
            {
                "statistic": name,
                "ks_distance": float(res.statistic),
                "ks_critical": crit,
                "ks_pvalue": float(res.pvalue),
                "mean_direct": float(sd[name].mean()),
                "mean_projected": float(sp[name].mean()),
                "z_score": _z(sd[name], sp[name]),
            }
        )
    if m == 1:
        # both laws should be the uniform phase
        for label, sample in (("direct", direct), ("projected", projected)):
            res = stats.kstest(np.angle(sample[:, 0, 0]), stats.uniform(loc=-np.pi, scale=2 * np.pi).cdf)
            report.rows.append(
                {
                    "statistic": f"arg_u11_vs_uniform_{label}",
                    "ks_distance": float(res.statistic),
                    "ks_pvalue": float(res.pvalue),
                    "ks_critical": math.sqrt(-0.5 * math.log(KS_ALPHA / 2) / n),
                }
            )
    return report
