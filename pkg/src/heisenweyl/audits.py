"""Report-both audits of integral identities over Haar and virtual samplers.

Each audit runs one Monte Carlo estimate and sets it beside the closed form
asserted for it (``paper_value``) and, where one exists, an independently
derived value (``oracle_value``).  The verdict records which comparands the
estimate matches within ``4 * stderr``; it is data, not an assertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .combinatorics import Partition, Tabloid, beta, schur_eval
from .fock import FourierSpec, fourier_taylor_fit, weighted_norm_sq
from .haar import SeededRng, pw_field, pw_monomial
from .montecarlo import Estimate, HaarSampler, VirtualSampler, haar_column_moment_exact, mc_integrate

__all__ = [
    "AuditReport",
    "IDENTITIES",
    "VERDICTS",
    "audit",
    "classify",
    "ggauss_single_coordinate_oracle",
    "uniform_phase_bessel",
]

IDENTITIES = (
    "ggauss",
    "monomial_norm",
    "schur_orthonormality",
    "character_orthogonality",
    "fourier_isometry",
)
VERDICTS = ("matches_paper", "matches_oracle", "matches_both", "matches_neither", "inconclusive")
BAND = 4.0
DEFAULT_RESOLUTION = 1e-3


def _cjson(z):
    if z is None:
        return None
    z = complex(z)
    return {"re": z.real, "im": z.imag}


@dataclass
class AuditReport:
    identity: str
    params: dict
    mc: Estimate
    paper_value: complex | None
    oracle_value: complex | None
    verdict: str
    z_scores: dict
    resolution: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": "audit",
            "identity": self.identity,
            "params": self.params,
            "mc": self.mc.to_json(),
            "paper_value": _cjson(self.paper_value),
            "oracle_value": _cjson(self.oracle_value),
            "verdict": self.verdict,
            "z_scores": self.z_scores,
            "resolution": self.resolution,
            "details": self.details,
        }


def classify(mc: Estimate, paper_value, oracle_value, resolution: float):
    """Verdict and per-comparand z-scores."""
    z = {}
    hits = {}
    for name, value in (("paper", paper_value), ("oracle", oracle_value)):
        if value is None:
            continue
        z[name] = mc.z_score(value)
        hits[name] = abs(mc.mean - complex(value)) <= max(BAND * mc.stderr, 1e-12)
    if mc.stderr > resolution:
        verdict = "inconclusive"
    elif hits.get("paper") and hits.get("oracle"):
        verdict = "matches_both"
    elif hits.get("paper"):
        verdict = "matches_paper"
    elif hits.get("oracle"):
        verdict = "matches_oracle"
    else:
        verdict = "matches_neither"
    return verdict, {k: (None if math.isinf(v) else v) for k, v in z.items()}


# oracles ---------------------------------------------------------------------


def uniform_phase_bessel(t: float) -> float:
    """``E[exp(t cos theta)]`` for uniform ``theta``, by adaptive quadrature."""
    val, _ = integrate.quad(lambda th: math.exp(t * math.cos(th)), 0.0, math.pi, epsabs=0.0, epsrel=1e-12)
    return val / math.pi


def ggauss_single_coordinate_oracle(t: float, level: int, terms: int = 200) -> float:
    """``E[exp(Re(t phi_i))]`` when ``phi_i`` is a Haar ``U(i)`` diagonal entry.

    The phase is uniform and ``|phi_i|^2`` has the Dirichlet moments
    ``k!(i-1)!/(i-1+k)!``, so the expectation is
    ``sum_k (t/2)^(2k)/k!^2 * E|phi_i|^(2k)``.  At ``i = 1`` this is ``I_0(t)``.
    """
    t = abs(t)
    total = 0.0
    for k in range(terms):
        term = (t / 2) ** (2 * k) / math.factorial(k) ** 2 * float(haar_column_moment_exact(level, (k,) + (0,) * (level - 1)))
        total += term
        if k > 5 and term < 1e-18 * total:
            break
    return total


# identities ------------------------------------------------------------------


def _h_vector(params):
    h = params.get("h", [1.0])
    return np.array([complex(v) if not isinstance(v, (list, tuple)) else complex(*v) for v in h])


def _audit_ggauss(params, n, rng):
    h = _h_vector(params)
    M = max(int(params.get("level", len(h))), len(h))
    mc = mc_integrate(lambda s: np.exp(pw_field(s, h).real), VirtualSampler(M), n, rng)
    norm2 = float(np.vdot(h, h).real)
    paper = math.exp(norm2 / 4)
    support = np.flatnonzero(h)
    oracle = None
    details = {"norm_sq": norm2}
    if len(support) == 1:
        i = int(support[0]) + 1
        oracle = ggauss_single_coordinate_oracle(abs(h[support[0]]), i)
        details["oracle"] = f"uniform-phase Dirichlet series at level {i}"
        if i == 1:
            details["bessel_i0_quadrature"] = uniform_phase_bessel(abs(h[0]))
    return mc, paper, oracle, {"h": [[z.real, z.imag] for z in h], "level": M}, details


def _audit_monomial_norm(params, n, rng):
    tab = params["tabloid"]
    tab = tab if isinstance(tab, Tabloid) else Tabloid.parse(tab)
    M = max(int(params.get("level", tab.levels)), tab.levels, 1)
    mc = mc_integrate(lambda s: np.abs(pw_monomial(s, tab)) ** 2, VirtualSampler(M), n, rng)
    lam = tab.partition
    paper = float(lam.factorial() * beta(lam)) if lam else 1.0
    oracle = None
    details = {}
    if len(tab.alphabet) == 1:
        i, k = tab.alphabet[0], lam[0]
        exact = haar_column_moment_exact(i, (k,) + (0,) * (i - 1))
        oracle = float(exact)
        details["oracle_exact"] = str(exact)
    elif not tab.alphabet:
        oracle = 1.0
    return mc, paper, oracle, {"tabloid": str(tab), "level": M}, details


def _audit_schur_orthonormality(params, n, rng):
    alph = tuple(params.get("alphabet", (1, 2)))
    lam = Partition(params["lam"])
    mu = Partition(params.get("mu", lam))
    M = max(int(params.get("level", max(alph))), max(alph))
    idx = [i - 1 for i in alph]

    def obs(s):
        t = s.phis()[:, idx]
        return schur_eval(lam, t) * np.conj(schur_eval(mu, t))

    mc = mc_integrate(obs, VirtualSampler(M), n, rng)
    paper = 1.0 if lam == mu else 0.0
    return mc, paper, None, {"alphabet": list(alph), "lam": list(lam), "mu": list(mu), "level": M}, {}


def _audit_character_orthogonality(params, n, rng):
    m = int(params.get("m", 2))
    lam = Partition(params["lam"])
    mu = Partition(params.get("mu", lam))

    def obs(u):
        ev = np.linalg.eigvals(u)
        return schur_eval(lam, ev, "jacobi_trudi") * np.conj(schur_eval(mu, ev, "jacobi_trudi"))

    mc = mc_integrate(obs, HaarSampler(m), n, rng)
    delta = 1.0 if lam == mu else 0.0
    # characters of U(m) are the partitions with at most m rows; longer ones vanish
    oracle = delta if lam.length <= m and mu.length <= m else 0.0
    return mc, delta, oracle, {"m": m, "lam": list(lam), "mu": list(mu)}, {}


def _audit_fourier_isometry(params, n, rng):
    spec = params["f"]
    spec = spec if isinstance(spec, FourierSpec) else FourierSpec.parse(spec)
    fit = fourier_taylor_fit(spec, n, rng, degree=params.get("degree"), level=params.get("level"))
    mc = fit.norm_sq
    paper = weighted_norm_sq(fit.polynomial, "support")
    ambient = weighted_norm_sq(fit.polynomial, "ambient", fit.polynomial.d)
    predicted = 0.0
    for c, t in spec.terms:
        lam = t.partition
        predicted += abs(c) ** 2 * (float(lam.factorial() * beta(lam)) if lam else 1.0)
    oracle = None
    level = spec.single_level()
    if level is not None and all(t.alphabet for _, t in spec.terms):
        # distinct powers of one phi_i are orthogonal by phase invariance
        by_power = {}
        for c, t in spec.terms:
            by_power[t.partition[0]] = by_power.get(t.partition[0], 0) + c
        oracle = sum(
            abs(c) ** 2 * float(haar_column_moment_exact(level, (k,) + (0,) * (level - 1)))
            for k, c in by_power.items()
        )
    details = {
        "fitted_norm_sq_ambient": ambient,
        "claimed_norm_sq": predicted,
        "fitted_coefficients": fit.polynomial.to_json(),
    }
    return mc, paper, oracle, {"f": str(spec), "level": fit.polynomial.d}, details


_DISPATCH = {
    "ggauss": _audit_ggauss,
    "monomial_norm": _audit_monomial_norm,
    "schur_orthonormality": _audit_schur_orthonormality,
    "character_orthogonality": _audit_character_orthogonality,
    "fourier_isometry": _audit_fourier_isometry,
}


def audit(identity: str, params: dict, n: int, rng: SeededRng, resolution: float | None = None) -> AuditReport:
    """Run one identity audit.

    Resolution defaults to 1e-3 (5e-3 for characters).  When the standard
    error exceeds it the verdict is ``inconclusive``.
    """
    if identity not in _DISPATCH:
        raise ValueError(f"unknown identity {identity!r}; choose from {IDENTITIES}")
    if resolution is None:
        resolution = 5e-3 if identity == "character_orthogonality" else DEFAULT_RESOLUTION
    mc, paper, oracle, echo, details = _DISPATCH[identity](dict(params), n, rng)
    verdict, z = classify(mc, paper, oracle, resolution)
    return AuditReport(identity, echo, mc, paper, oracle, verdict, z, resolution, details)
