import math

import pytest
from scipy import special

from heisenweyl.audits import (
    IDENTITIES,
    VERDICTS,
    audit,
    classify,
    ggauss_single_coordinate_oracle,
    uniform_phase_bessel,
)
from heisenweyl.haar import SeededRng
from heisenweyl.montecarlo import Estimate


def est(mean, stderr):
    return Estimate(complex(mean), stderr, 1000, 0)


@pytest.mark.parametrize(
    "mc, paper, oracle, verdict",
    [
        (est(1.0, 1e-4), 1.0, 1.0, "matches_both"),
        (est(1.0, 1e-4), 1.0, 2.0, "matches_paper"),
        (est(2.0, 1e-4), 1.0, 2.0, "matches_oracle"),
        (est(3.0, 1e-4), 1.0, 2.0, "matches_neither"),
        (est(1.0, 1e-2), 1.0, 1.0, "inconclusive"),
        (est(1.0, 0.0), 1.0, None, "matches_paper"),
    ],
)
def test_classify(mc, paper, oracle, verdict):
    got, z = classify(mc, paper, oracle, 1e-3)
    assert got == verdict
    assert got in VERDICTS
    assert ("oracle" in z) == (oracle is not None)


def test_bessel_oracles_agree():
    for t in (0.0, 0.5, 1.0, 2.5):
        assert uniform_phase_bessel(t) == pytest.approx(special.i0(t), rel=1e-12)
        assert ggauss_single_coordinate_oracle(t, 1) == pytest.approx(special.i0(t), rel=1e-12)


def test_single_coordinate_oracle_level_two():
    # |phi_2|^2 ~ Beta(1, 1): E exp(t Re phi_2) = sum (t/2)^(2k) / (k! (k+1)!) = 2 I_1(t) / t
    t = 1.3
    assert ggauss_single_coordinate_oracle(t, 2) == pytest.approx(2 * special.i1(t) / t, rel=1e-12)


def test_audit_report_json_fields():
    rep = audit("monomial_norm", {"tabloid": "1,2:1,1"}, 20_000, SeededRng(1))
    data = rep.to_json()
    assert set(data) >= {"identity", "params", "mc", "paper_value", "oracle_value", "verdict", "z_scores"}
    assert set(data["mc"]) == {"mean_re", "mean_im", "stderr", "n", "seed"}
    assert data["paper_value"]["re"] == pytest.approx(1 / 6)
    # the estimate sits near 1/2, far from the asserted 1/6
    assert abs(rep.mc.mean - 0.5) <= 4 * rep.mc.stderr


def test_ggauss_prefers_bessel_oracle():
    rep = audit("ggauss", {"h": [1.0]}, 200_000, SeededRng(2), resolution=5e-3)
    assert rep.paper_value == pytest.approx(math.exp(0.25))
    assert rep.oracle_value == pytest.approx(special.i0(1.0))
    assert rep.verdict == "matches_oracle"


def test_character_audit_trivial_pair():
    rep = audit("character_orthogonality", {"m": 2, "lam": [1, 1], "mu": [1, 1]}, 1000, SeededRng(3))
    assert rep.verdict == "matches_both"
    # a partition longer than m gives the zero character
    rep = audit("character_orthogonality", {"m": 2, "lam": [1, 1, 1], "mu": [1, 1, 1]}, 1000, SeededRng(3))
    assert rep.oracle_value == 0 and rep.paper_value == 1
    assert rep.verdict == "matches_oracle"


def test_schur_and_isometry_run():
    rep = audit("schur_orthonormality", {"alphabet": [1, 2], "lam": [1, 1], "mu": [1, 1]}, 5000, SeededRng(4))
    assert rep.oracle_value is None and rep.paper_value == 1
    rep = audit("fourier_isometry", {"f": "2:1 + 0.5*2:2"}, 20_000, SeededRng(5))
    # oracle: 1 * 1/2 + 0.25 * 1/3
    assert rep.oracle_value == pytest.approx(0.5 + 0.25 / 3)
    assert "fitted_coefficients" in rep.details


def test_unknown_identity():
    assert "ggauss" in IDENTITIES
    with pytest.raises(ValueError):
        audit("nope", {}, 10, SeededRng(1))
