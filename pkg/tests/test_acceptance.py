"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import special
from sympy.polys.domains import QQ_I

from heisenweyl import combinatorics as comb
from heisenweyl.audits import VERDICTS
from heisenweyl.fock import coherent_norm_partial_sums, monomial_weight, weighted_inner
from heisenweyl.haar import SeededRng, livsic_project, sample_haar_batch, unitarity_defect
from heisenweyl.heat import (
    evaluation_grid,
    evolution_checks,
    gaussian_moment,
    gaussian_moment_quadrature,
    generator_apply,
    generator_at_zero,
    heat_semigroup,
    pde_order,
)
from heisenweyl.montecarlo import consistency_test, haar_column_moment_exact
from heisenweyl.polynomial import Polynomial, multi_indices
from heisenweyl.suites import (
    SuiteConfig,
    character_audits,
    column_moment_checks,
    run_suite,
    shift_norm_audit,
)
from heisenweyl.weyl import (
    QuaternionPair,
    check_commutator,
    derive_op,
    generator_tau,
    mult_lin_op,
    random_exppoly,
    random_vector,
    weyl_exchange_exponent,
    weyl_relation_discrepancy,
)

pytestmark = pytest.mark.acceptance
SEED = 42


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False

    def check(self):
        assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"


@pytest.mark.criterion(1, "combinatorics exactness")
def test_combinatorics_exactness():
    with Budget(10) as budget:
        for n in range(1, 9):
            for lam in comb.partitions_of(n):
                assert comb.syt_count(lam) == len(comb.standard_tableaux(lam)), lam
        for n in range(0, 9):
            assert sum(comb.syt_count(lam) ** 2 for lam in comb.partitions_of(n)) == math.factorial(n)
        for n in range(1, 7):
            coeffs, verified = comb.frobenius_coefficients(n)
            assert verified, n
            assert all(coeffs[lam] == comb.syt_count(lam) for lam in comb.partitions_of(n))
    budget.check()


@pytest.mark.criterion(2, "Schur evaluation agreement")
def test_schur_three_methods_agree():
    gen = SeededRng(SEED, 2).generator()
    worst = 0.0
    with Budget(5) as budget:
        for n in range(1, 7):
            for lam in comb.partitions_of(n):
                t = comb.well_separated_points(gen, 100, max(lam.length, 2))
                values = [comb.schur_eval(lam, t, m) for m in comb.SCHUR_METHODS]
                for a, b in itertools.combinations(values, 2):
                    worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(a), np.abs(b)))))
    budget.check()
    assert worst <= 1e-10


@pytest.mark.criterion(3, "character orthogonality on U(2), U(3)")
def test_character_orthogonality():
    failures = []
    with Budget(120) as budget:
        for m in (2, 3):
            for rep in character_audits(m, 100_000, SeededRng(SEED, 600 + m), max_weight=3, resolution=5e-3):
                delta = rep.oracle_value
                # 1e-12 floor: rows like |det u|^2 are identically 1 up to rounding
                within = abs(rep.mc.mean - delta) <= max(4 * rep.mc.stderr, 1e-12)
                if not (within and rep.mc.stderr <= 5e-3):
                    failures.append((m, rep.params["lam"], rep.params["mu"], rep.mc.mean.real, rep.mc.stderr))
    budget.check()
    assert not failures, f"{len(failures)} pairs outside tolerance: {failures}"


@pytest.mark.criterion(4, "column moments")
def test_column_moments():
    assert haar_column_moment_exact(2, (1, 1)) == Fraction(1, 6)
    with Budget(60) as budget:
        rows = column_moment_checks(100_000, SeededRng(SEED, 0), max_eta=4, max_weight=4)
    budget.check()
    assert any(r["params"] == {"eta": 2, "alpha": [1, 1]} for r in rows)
    bad = [(r["params"], r["z_score"]) for r in rows if not r["passed"]]
    assert not bad


@pytest.mark.criterion(5, "Livsic consistency")
def test_livsic_consistency():
    with Budget(120) as budget:
        reports = [consistency_test(m, 100_000, SeededRng(SEED, 100 + m)) for m in (1, 2, 3)]
        gen = SeededRng(SEED, 99).generator()
        worst, count = 0.0, 0
        per = 10_000 // 19 + 1
        for m1 in range(2, 21):
            u = sample_haar_batch(m1, per, gen)
            worst = max(worst, float(unitarity_defect(livsic_project(u, check=False)).max()))
            count += per
    budget.check()
    for rep in reports:
        for row in rep.rows:
            assert row["ks_distance"] < row["ks_critical"], (rep.m, row)
    assert count >= 10_000
    assert worst <= 1e-10


@pytest.mark.criterion(6, "weighted Fock/Hardy space")
def test_weighted_fock():
    failures = []
    with Budget(10) as budget:
        for d in range(1, 4):
            alphas = list(multi_indices(d, 4))
            for a, b in itertools.product(alphas, repeat=2):
                g = weighted_inner(Polynomial.monomial(a, Fraction(1)), Polynomial.monomial(b, Fraction(1)))
                expected = monomial_weight(a) if a == b else 0
                if g != expected:
                    failures.append(("gram", a, b, g))
            for a in alphas:
                lam = comb.Partition(sorted((x for x in a if x), reverse=True))
                if monomial_weight(a) != (lam.factorial() * comb.beta(lam) if lam else 1):
                    failures.append(("weight", a))
        for h in ([0.3], [0.7, -0.4 + 0.5j, 0.3j], [1.5, 1.0j]):
            rows = coherent_norm_partial_sums(h, 40)
            limit = rows[0]["limit"]
            for prev, row in zip(rows, rows[1:]):
                if row["unweighted"] < prev["unweighted"]:
                    failures.append(("coherent not increasing", h, row["n"]))
            for row in rows:
                gap = limit - row["unweighted"]
                if abs(gap - row["tail"]) > 8 * np.finfo(float).eps * limit:
                    failures.append(("coherent tail", h, row["n"], gap, row["tail"]))
        shift = shift_norm_audit(100, SeededRng(SEED, 500))
        if shift["violations"]:
            failures.append(("shift bound", shift["violations"], shift["worst_case"]))
    budget.check()
    assert not failures, failures


@pytest.mark.criterion(7, "operator algebra exactness")
def test_operator_algebra():
    gen = SeededRng(SEED, 1000).generator()
    half = QQ_I(Fraction(1, 2), 0)
    cocycle, exchange = set(), set()
    with Budget(10) as budget:
        for _ in range(100):
            f = random_exppoly(3, 3, gen)
            a, b, a2, b2 = (random_vector(3, gen) for _ in range(4))
            assert check_commutator(a, b, f) == (True, True)
            h, h2 = QuaternionPair(a, b), QuaternionPair(a2, b2)
            im = h.im_inner(h2)
            kappa = weyl_relation_discrepancy(h, h2, f)
            if im:
                cocycle.add(1 if kappa == im * half else (-1 if kappa == -im * half else None))
                ke = weyl_exchange_exponent(h, h2, f)
                exchange.add(1 if ke == im else (-1 if ke == -im else None))
        for _ in range(5):
            f = random_exppoly(3, 2, gen)
            a, b = random_vector(3, gen), random_vector(3, gen)
            assert generator_tau(a, b, f) == mult_lin_op(f, b) + derive_op(f, a)
    budget.check()
    assert len(cocycle) == 1 and None not in cocycle, cocycle
    assert len(exchange) == 1 and None not in exchange, exchange


@pytest.mark.criterion(8, "heat semigroup")
def test_heat_semigroup():
    one = Polynomial.constant(1, 1)
    grid = evaluation_grid(1)
    x = grid[:, 0].real
    with Budget(60) as budget:
        for r in (0.05, 0.1, 0.5, 1.0, 10.0):
            closed = (1 + 2 * r) ** -0.5 * np.exp(-r * x**2 / (1 + 2 * r))
            quad = heat_semigroup(one, r, "quadrature").evaluate(grid)
            assert np.max(np.abs(quad - closed)) <= 1e-8, r
            assert np.max(np.abs(heat_semigroup(one, r).evaluate(grid) - closed)) <= 1e-8, r

        gen = SeededRng(SEED, 1100).generator()
        for d in (1, 2):
            for deg in range(5):
                p = Polynomial(d, {a: complex(*gen.normal(size=2)) for a in multi_indices(d, deg)})
                for r, s in itertools.product((0.05, 0.1, 0.5), repeat=2):
                    assert evolution_checks(p, r, s)["semigroup"] <= 1e-8

        assert pde_order(one, 0.1)["order"] >= 1.9
        p = Polynomial(2, {(1, 0): 1.0, (0, 2): 0.5j, (2, 1): -0.25})
        assert pde_order(p, 0.2)["order"] >= 1.9

        for k in range(9):
            for r in (0.1, 0.5, 1.0, 2.0):
                exact = float(gaussian_moment(k, Fraction(r)))
                assert abs(gaussian_moment_quadrature(k, r) - exact) <= 1e-10 * exact, (k, r)

        a1 = generator_apply(one)
        assert a1 == Polynomial(1, {(0,): -1, (2,): -1})
        assert np.max(np.abs(generator_at_zero(one) - (-(1 + x**2)))) <= 1e-6
    budget.check()


@pytest.mark.criterion(9, "audit completeness")
def test_audit_completeness():
    with Budget(600) as budget:
        records = []
        for suite in ("norms", "fourier"):
            report = run_suite(SuiteConfig(suite, samples=1_000_000, seed=SEED))
            records += report.records
    budget.check()
    audits = [r for r in records if r["kind"] == "audit" and "identity" in r]
    identities = {r["identity"] for r in audits}
    assert {"monomial_norm", "schur_orthonormality", "ggauss", "fourier_isometry"} <= identities
    assert any(r["identity"] == "monomial_norm" and "," in r["params"]["tabloid"].split(":")[0] for r in audits)
    for r in audits:
        assert not r["gating"]
        assert r["verdict"] in VERDICTS
        assert r["mc"]["stderr"] <= 1e-3, (r["identity"], r["params"], r["mc"]["stderr"])
    single = [r for r in audits if r["identity"] == "ggauss" and r["params"]["h"] == [[1.0, 0.0]]]
    assert single
    row = single[0]
    assert row["paper_value"]["re"] == pytest.approx(math.exp(0.25))
    assert row["oracle_value"]["re"] == pytest.approx(float(special.i0(1.0)), rel=1e-12)
