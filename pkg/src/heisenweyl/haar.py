"""Haar-random unitaries, the Livšic block projection and virtual-matrix chains.

A virtual sample at level ``M`` is the chain ``(u_1, ..., u_M)`` obtained by
drawing ``u_M`` from Haar measure on ``U(M)`` and repeatedly projecting::

    u = [[z, a], [b, t]]  ->  z - a (1 + t)^{-1} b

Every routine accepts leading batch axes so that Monte Carlo drivers can push
whole blocks of draws through numpy at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SeededRng",
    "ProjectionDegeneracyError",
    "LevelExceedsSampleError",
    "VirtualSample",
    "as_generator",
    "unitarity_defect",
    "sample_haar",
    "sample_haar_batch",
    "livsic_project",
    "sample_virtual",
    "pw_phi",
    "pw_field",
    "pw_field_conj",
    "pw_monomial",
    "matrix_to_json",
    "matrix_from_json",
]

BRANCH_THRESHOLD = 1e-12
PROJECTION_TOL = 1e-10
HAAR_TOL = 1e-12


class ProjectionDegeneracyError(ArithmeticError):
    """Projected block failed the unitarity check."""

    def __init__(self, defect: float, corner_gap: float):
        self.defect = defect
        self.corner_gap = corner_gap
        super().__init__(
            f"projection degeneracy: unitarity defect {defect:.3e} with |1+t| = {corner_gap:.3e}"
        )


class LevelExceedsSampleError(IndexError):
    """Requested a chain level above the sampled level."""


@dataclass(frozen=True)
class SeededRng:
    """Reproducible random source keyed by ``(seed, stream)``.

    Distinct streams (and distinct shards within a stream) are statistically
    independent children of one :class:`numpy.random.SeedSequence`.
    """

    seed: int = 42
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ValueError(f"{name} must fit in 64 unsigned bits, got {v}")

    def generator(self, shard: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream), int(shard)))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, stream: int) -> "SeededRng":
        return SeededRng(self.seed, stream)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return SeededRng(42 if rng is None else int(rng)).generator()
    raise TypeError(f"unsupported random source {rng!r}")


def unitarity_defect(u) -> np.ndarray:
    """``max |u* u - I|`` per matrix (batched)."""
    u = np.asarray(u)
    m = u.shape[-1]
    g = np.conj(np.swapaxes(u, -1, -2)) @ u
    return np.abs(g - np.eye(m)).max(axis=(-2, -1))


def sample_haar_batch(m: int, n: int, rng) -> np.ndarray:
    """``n`` independent Haar unitaries of size ``m``; shape ``(n, m, m)``.

    QR of a complex Ginibre matrix with each column of ``Q`` rephased by
    ``r_kk / |r_kk|`` (Mezzadri's correction).
    """
    if m < 1:
        raise ValueError("dimension must be at least 1")
    gen = as_generator(rng)
    z = (gen.standard_normal((n, m, m)) + 1j * gen.standard_normal((n, m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    mag = np.abs(diag)
    bad = (mag == 0).any(axis=-1)
    if bad.any():
        # measure zero; redraw the offending matrices
        q[bad] = sample_haar_batch(m, int(bad.sum()), gen)
        diag = np.where(bad[:, None], 1.0, diag)
        mag = np.where(bad[:, None], 1.0, mag)
    return q * (diag / mag)[:, None, :]


def sample_haar(m: int, rng) -> np.ndarray:
    """One Haar unitary of size ``m``."""
    u = sample_haar_batch(m, 1, rng)[0]
    defect = float(unitarity_defect(u))
    if defect > HAAR_TOL:
        raise ArithmeticError(f"sampled matrix not unitary (defect {defect:.2e})")
    return u


def livsic_project(u, check: bool = True) -> np.ndarray:
    """Map ``U(m+1) -> U(m)``: ``z - a (1+t)^{-1} b``, or ``z`` when ``t = -1``.

    ``u`` may be batched; the last two axes hold the matrix.

    Raises
    ------
    ProjectionDegeneracyError
        If a projected block misses unitarity by more than 1e-10.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim < 2 or u.shape[-1] != u.shape[-2] or u.shape[-1] < 2:
        raise ValueError("expected square matrices of size at least 2")
    m = u.shape[-1] - 1
    z = u[..., :m, :m]
    a = u[..., :m, m]
    b = u[..., m, :m]
    t = u[..., m, m]
    gap = np.abs(1.0 + t)
    regular = gap >= BRANCH_THRESHOLD
    denom = np.where(regular, 1.0 + t, 1.0)
    corr = a[..., :, None] * b[..., None, :] / denom[..., None, None]
    out = z - np.where(regular[..., None, None], corr, 0.0)
    if check:
        defect = unitarity_defect(out)
        worst = np.argmax(defect) if defect.ndim else ()
        if np.max(defect) > PROJECTION_TOL:
            raise ProjectionDegeneracyError(float(np.max(defect)), float(np.asarray(gap)[worst]))
    return out


@dataclass(frozen=True, eq=False)
class VirtualSample:
    """Chain ``(u_1, ..., u_M)``; ``chain[k-1]`` has trailing shape ``(k, k)``.

    With a batch, every level carries the same leading axis of draws.
    """

    chain: tuple

    @property
    def level(self) -> int:
        return len(self.chain)

    @property
    def batch_size(self):
        lead = self.chain[0].shape[:-2]
        return lead[0] if lead else None

    def u(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.level:
            raise LevelExceedsSampleError(f"level {k} outside 1..{self.level}")
        return self.chain[k - 1]

    def draw(self, j: int) -> "VirtualSample":
        if self.batch_size is None:
            raise ValueError("sample is not batched")
        return VirtualSample(tuple(c[j] for c in self.chain))

    def phis(self) -> np.ndarray:
        """All diagonal observables ``(phi_1, ..., phi_M)`` along the last axis."""
        return np.stack([c[..., k, k] for k, c in enumerate(self.chain)], axis=-1)

    def is_consistent(self) -> bool:
        """Recompute each projection and compare bit for bit."""
        return all(
            np.array_equal(livsic_project(self.chain[k + 1], check=False), self.chain[k])
            for k in range(self.level - 1)
        )


def sample_virtual(M: int, rng, n: int | None = None) -> VirtualSample:
    """Draw ``u_M`` from Haar measure and project down to level 1."""
    if M < 1:
        raise ValueError("level must be at least 1")
    top = sample_haar_batch(M, 1 if n is None else n, rng)
    levels = [top]
    for _ in range(M - 1):
        levels.append(livsic_project(levels[-1]))
    levels.reverse()
    if n is None:
        levels = [c[0] for c in levels]
    return VirtualSample(tuple(levels))


def pw_phi(s: VirtualSample, i: int):
    """Diagonal entry ``(u_i)_{ii}``."""
    if i < 1 or i > s.level:
        raise LevelExceedsSampleError(f"level {i} exceeds sample level {s.level}")
    return s.chain[i - 1][..., i - 1, i - 1]


def _coefficients(h, level: int) -> np.ndarray:
    h = np.asarray(h, dtype=complex).ravel()
    if h.size > level and np.any(h[level:] != 0):
        raise LevelExceedsSampleError(f"coefficient support exceeds sample level {level}")
    return h[:level]


def pw_field(s: VirtualSample, h):
    """``phi_h = sum_i phi_i h_i``."""
    h = _coefficients(h, s.level)
    if not h.size:
        return np.zeros(s.chain[0].shape[:-2], dtype=complex)[()] if s.level else 0j
    return s.phis()[..., : h.size] @ h


def pw_field_conj(s: VirtualSample, h):
    """``sum_i conj(phi_i) h_i``: conjugate observables, holomorphic in ``h``."""
    h = _coefficients(h, s.level)
    if not h.size:
        return np.zeros(s.chain[0].shape[:-2], dtype=complex)[()]
    return np.conj(s.phis()[..., : h.size]) @ h


def pw_monomial(s: VirtualSample, tab):
    """``prod_k phi_{i_k}^{lambda_k}``; the empty tabloid gives 1."""
    out = np.ones(s.chain[0].shape[:-2], dtype=complex)
    if tab.levels > s.level:
        raise LevelExceedsSampleError(f"tabloid {tab} exceeds sample level {s.level}")
    for i, p in zip(tab.alphabet, tab.partition):
        out = out * pw_phi(s, i) ** p
    return out[()] if out.ndim == 0 else out


def matrix_to_json(u) -> dict:
    u = np.asarray(u, dtype=complex)
    return {
        "dimension": int(u.shape[-1]),
        "entries": [[float(z.real), float(z.imag)] for z in u.ravel()],
    }


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    m = int(data["dimension"])
    flat = np.array([complex(re, im) for re, im in data["entries"]])
    if flat.size != m * m:
        raise ValueError("entry count does not match dimension")
    return flat.reshape(m, m)
