"""Exit criteria: each test runs its checks at the pinned tolerances and prints one line."""
import pytest

from vvforms.harness import REGISTRY, run_check

SEED = 20240611

CRITERIA = {
    1: ("arithmetic exactness", ["arith-relations", "arith-hurwitz-closure", "arith-check-homomorphism"]),
    2: ("det(CZ+D) = det M det(conj(C)Z'+conj(D))", ["lemma-detAB"]),
    3: ("hermitian Jacobian: finite differences and determinant", ["lemma-jacU-fd", "lemma-jacU-det"]),
    4: ("Eisenstein theta automorphy and symmetry", ["eis-theta-automorphy", "eis-theta-symmetry"]),
    5: ("Eisenstein three-term relations", ["thm-MTa-relations"]),
    6: ("Eisenstein bracket determinant is skew", ["lemma-detsym-skew", "lemma-detsym-quotient"]),
    7: ("Gauss theta-square automorphy and relations", ["gauss-theta-automorphy", "thm-MTb-relations"]),
    8: ("Gauss determinant quotient skew, phi10 symmetric", ["lemma-detsymG-quotient", "gauss-phi10-symmetry"]),
    9: ("Gauss vanishing-locus discovery", ["gauss-vanishing-locus"]),
    10: ("rho_Jac properties", ["rhojac-multiplicative", "rhojac-real-form", "rhojac-slice",
                                "rhojac-unipotent", "rhojac-diagonal", "rhojac-dimension"]),
    11: ("quaternionic Jacobian: finite differences and determinant", ["lemma-jacrho-fd", "lemma-jacrho-det"]),
    12: ("S3 quotient maps", ["lemma-normal-s3"]),
    13: ("reduction identity and generic three-term rule", ["lemma-jac-reduction", "bracket-three-term-generic"]),
    14: ("bracket automorphy with St (x) St", ["bracket-automorphy"]),
    15: ("truncation certified against brute force", ["theta-truncation"]),
}

PINNED = {
    "arith-relations": 0.0, "arith-hurwitz-closure": 0.0, "arith-check-homomorphism": 1e-12,
    "lemma-detAB": 1e-9, "lemma-jacU-fd": 1e-5, "lemma-jacU-det": 1e-9,
    "eis-theta-automorphy": 1e-8, "eis-theta-symmetry": 1e-10, "thm-MTa-relations": 1e-8,
    "lemma-detsym-skew": 1e-8, "lemma-detsym-quotient": 1e-6,
    "gauss-theta-automorphy": 1e-8, "thm-MTb-relations": 1e-8,
    "lemma-detsymG-quotient": 1e-6, "gauss-phi10-symmetry": 1e-8, "gauss-vanishing-locus": 1e-6,
    "rhojac-multiplicative": 1e-10, "rhojac-real-form": 1e-12, "rhojac-slice": 1e-10,
    "rhojac-unipotent": 1e-10, "rhojac-diagonal": 1e-12, "rhojac-dimension": 0.0,
    "lemma-jacrho-fd": 1e-5, "lemma-jacrho-det": 1e-8, "lemma-normal-s3": 0.0,
    "lemma-jac-reduction": 1e-8, "bracket-three-term-generic": 1e-10,
    "bracket-automorphy": 1e-6, "theta-truncation": 1.0,
}

MIN_SAMPLES = {
    "arith-check-homomorphism": 100, "lemma-detAB": 150, "lemma-jacU-fd": 20, "lemma-jacU-det": 50,
    "eis-theta-automorphy": 5 * 20 * 5, "thm-MTa-relations": 50, "lemma-detsym-skew": 10,
    "lemma-detsym-quotient": 10, "gauss-theta-automorphy": 10 * 20, "thm-MTb-relations": 50,
    "lemma-detsymG-quotient": 10, "gauss-phi10-symmetry": 10, "gauss-vanishing-locus": 40,
    "rhojac-multiplicative": 100, "lemma-jacrho-fd": 20, "lemma-jacrho-det": 30,
    "lemma-jac-reduction": 20, "bracket-three-term-generic": 20, "bracket-automorphy": 10,
    "theta-truncation": 20,
}


def test_tolerances_pinned():
    assert {k: REGISTRY[k].tolerance for k in PINNED} == PINNED
    assert set(PINNED) == set(REGISTRY)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, ids = CRITERIA[number]
    records = [run_check(REGISTRY[i], SEED) for i in ids]
    ok = all(r.passed for r in records)
    detail = ", ".join(f"{r.id}={r.max_residual:.2e}/{r.tolerance:.0e}" for r in records)
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})")
    for r in records:
        assert r.samples >= MIN_SAMPLES.get(r.id, 1), f"{r.id}: only {r.samples} samples"
    failed = [r for r in records if not r.passed]
    assert not failed, "; ".join(f"{r.id}: residual {r.max_residual} > {r.tolerance} {r.details}" for r in failed)
