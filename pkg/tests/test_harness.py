import json

import numpy as np
import pytest

from vvforms import harness
from vvforms.arith import GAUSS, iq
from vvforms.brackets import theta_form, theta_square_form
from vvforms.groups import UNITARY_GAUSS, congruence_sample, identity_element, translation
from vvforms.halfplane import HalfPlaneError, random_hermitian_point
from vvforms.harness import (
    AUTOMORPHY_POLICY,
    REGISTRY,
    RunConfig,
    automorphy_pairs,
    check_automorphy,
    dumps_report,
    fd_jacobian,
    format_report,
    run_suite,
)
from vvforms.reps import AutomorphyFactorSpec
from vvforms.theta import EISENSTEIN, characteristic_table, gauss_generators

CRITERION_CHECKS = [
    "arith-relations", "arith-hurwitz-closure", "arith-check-homomorphism",
    "lemma-detAB", "lemma-jacU-fd", "lemma-jacU-det",
    "eis-theta-automorphy", "eis-theta-symmetry", "thm-MTa-relations",
    "lemma-detsym-skew", "lemma-detsym-quotient",
    "gauss-theta-automorphy", "thm-MTb-relations", "lemma-detsymG-quotient", "gauss-phi10-symmetry",
    "gauss-vanishing-locus",
    "rhojac-multiplicative", "rhojac-real-form", "rhojac-slice", "rhojac-unipotent", "rhojac-diagonal",
    "rhojac-dimension", "lemma-jacrho-fd", "lemma-jacrho-det", "lemma-normal-s3",
    "lemma-jac-reduction", "bracket-three-term-generic", "bracket-automorphy", "theta-truncation",
]


def test_fd_identity(rng):
    Z = random_hermitian_point(rng)
    assert np.abs(fd_jacobian(lambda W: W, Z) - np.eye(4)).max() < 1e-12


def test_fd_translation(rng):
    H = np.array([[1, 2 + 1j], [2 - 1j, 0]])
    Z = random_hermitian_point(rng)
    assert np.abs(fd_jacobian(lambda W: W + H, Z) - np.eye(4)).max() < 1e-9


def test_fd_inversion_at_iE():
    Z = 1j * np.eye(2)
    Zi = np.linalg.inv(Z)
    F = fd_jacobian(lambda W: -np.linalg.inv(W), Z)
    assert np.abs(F - np.kron(Zi, Zi.T)).max() < 1e-6


def test_fd_fails_outside():
    def boom(W):
        raise HalfPlaneError("out")

    with pytest.raises(HalfPlaneError):
        fd_jacobian(boom, 1j * np.eye(2))


def test_automorphy_identity(rng):
    f = theta_form(characteristic_table(EISENSTEIN)[1])
    r = check_automorphy(f, AutomorphyFactorSpec(1), identity_element(UNITARY_GAUSS), random_hermitian_point(rng))
    assert r.residual == 0 and r.passed


def test_automorphy_eisenstein_theta2(rng):
    f = theta_form(characteristic_table(EISENSTEIN)[1], AUTOMORPHY_POLICY)
    pairs, _ = automorphy_pairs("sqrt-3", rng, 2, 2)
    for M, pts in pairs:
        for Z in pts:
            assert check_automorphy(f, AutomorphyFactorSpec(1), M, Z).residual < 1e-8


def test_automorphy_gauss_theta3_squared(rng):
    f = theta_square_form(gauss_generators()[2], AUTOMORPHY_POLICY)
    pairs, _ = automorphy_pairs("1+i", rng, 2, 2)
    for M, pts in pairs:
        for Z in pts:
            assert check_automorphy(f, AutomorphyFactorSpec(2, "det^r/2"), M, Z).residual < 1e-8


def test_automorphy_wrong_factor_detected(rng):
    # Theta squares are not weight-1 forms: the harness must see the mismatch
    f = theta_square_form(gauss_generators()[2], AUTOMORPHY_POLICY)
    pairs, _ = automorphy_pairs("1+i", rng, 3, 1)
    worst = max(check_automorphy(f, AutomorphyFactorSpec(1), M, pts[0]).residual for M, pts in pairs)
    assert worst > 1e-3


def test_translation_invariance():
    T = translation(UNITARY_GAUSS, [[iq(2, 0, GAUSS), iq(1, 1, GAUSS)], [iq(1, -1, GAUSS), iq(0, 0, GAUSS)]])
    f = theta_square_form(gauss_generators()[0])
    Z = 1j * np.eye(2) + 0.1
    assert check_automorphy(f, AutomorphyFactorSpec(2, "det^r/2"), T, Z).residual < 1e-12


def test_congruence_points_have_margin(rng):
    pairs, _ = automorphy_pairs("sqrt-3", rng, 3, 3)
    for M, pts in pairs:
        for Z in pts:
            assert harness._pair_margin(M.complex_image, Z) >= AUTOMORPHY_POLICY.min_margin


def test_registry_complete():
    assert sorted(REGISTRY) == sorted(CRITERION_CHECKS)
    for chk in REGISTRY.values():
        assert chk.anchor and chk.tolerance >= 0


def test_arith_suite_only():
    report = run_suite(RunConfig(seed=1, suites=["arith"]))
    assert [r["id"] for r in report["checks"]] == ["arith-relations", "arith-hurwitz-closure", "arith-check-homomorphism"]
    assert report["passed"]


def test_unknown_ids():
    with pytest.raises(ValueError):
        run_suite(RunConfig(checks=["no-such-check"]))
    with pytest.raises(ValueError):
        run_suite(RunConfig(suites=["nope"]))
    with pytest.raises(ValueError):
        RunConfig.from_mapping({"seeds": 3})


def test_deterministic_report():
    cfg = RunConfig(seed=7, suites=["unitary", "quaternionic"])
    a, b = run_suite(cfg), run_suite(cfg)
    a.pop("timing"), b.pop("timing")
    assert dumps_report(a) == dumps_report(b)


def test_subset_reproduces_full_residual():
    a = run_suite(RunConfig(seed=3, checks=["lemma-detAB"]))
    b = run_suite(RunConfig(seed=3, suites=["unitary"]))
    ra = a["checks"][0]["max_residual"]
    rb = next(r for r in b["checks"] if r["id"] == "lemma-detAB")["max_residual"]
    assert ra == rb


def test_env_seed(monkeypatch):
    monkeypatch.setenv(harness.SEED_ENV, "99")
    report = run_suite(RunConfig(checks=["arith-relations"]))
    assert report["seed"] == 99 and report["seed_source"] == "environment"
    report = run_suite(RunConfig(seed=5, checks=["arith-relations"]))
    assert report["seed"] == 5 and report["seed_source"] == "explicit"


def test_tol_scale():
    report = run_suite(RunConfig(seed=1, checks=["lemma-detAB"], tol_scale=0.5))
    assert report["checks"][0]["tolerance"] == pytest.approx(0.5e-9)


def test_report_roundtrip():
    report = run_suite(RunConfig(seed=1, checks=["rhojac-dimension"]))
    text = dumps_report(report)
    back = json.loads(text)
    assert back["schema_version"] == harness.SCHEMA_VERSION
    assert "PASS" in format_report(back)
    assert back["checks"][0]["details"]["dimension"] == 6
