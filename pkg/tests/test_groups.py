import numpy as np
import pytest

from vvforms.arith import EISENSTEIN, I1, ImagQuadInt, Quaternion, iq
from vvforms.groups import (
    KINDS,
    QUATERNIONIC,
    UNITARY_EISENSTEIN,
    UNITARY_GAUSS,
    GroupElement,
    InvalidElementError,
    SignedPermutation,
    as_matrix,
    congruence_member,
    congruence_sample,
    conj_by_i1,
    identity_element,
    j_element,
    random_word,
    s3_quotient_maps,
    scalar_element,
    sigma_map,
    tau_map,
    translation,
    validate_element,
)

LEVELS = {UNITARY_EISENSTEIN: "sqrt-3", UNITARY_GAUSS: "1+i", QUATERNIONIC: "p"}


@pytest.mark.parametrize("kind", KINDS)
def test_random_words_validate(kind):
    for s in range(100 if kind != QUATERNIONIC else 40):
        M = random_word(kind, 6, s)
        assert validate_element(M.entries, kind) == M


@pytest.mark.parametrize("kind", KINDS)
def test_word_of_length_zero_and_j(kind):
    assert random_word(kind, 0, 0).is_identity()
    J = j_element(kind)
    assert (J @ J @ J @ J).is_identity()
    assert not (J @ J).is_identity()


@pytest.mark.parametrize("kind", [UNITARY_EISENSTEIN, UNITARY_GAUSS])
def test_det_unimodular(kind):
    for s in range(100):
        assert abs(abs(random_word(kind, 5, s).det) - 1) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
def test_inverse(kind):
    for s in range(10):
        M = random_word(kind, 4, s)
        assert (M @ M.inverse()).is_identity()
        assert (M.inverse() @ M).is_identity()


def test_invalid_element():
    E = identity_element(UNITARY_EISENSTEIN).entries.copy()
    E[0, 0] = iq(2, 0, EISENSTEIN)
    with pytest.raises(InvalidElementError):
        validate_element(E, UNITARY_EISENSTEIN)


def test_non_integral_quaternion_rejected():
    H = as_matrix(QUATERNIONIC, [[Quaternion(0), Quaternion(0, 1, 0, 0) / 2], [Quaternion(0, -1, 0, 0) / 2, Quaternion(0)]])
    with pytest.raises(InvalidElementError):
        translation(QUATERNIONIC, H)


@pytest.mark.parametrize("kind", KINDS)
def test_congruence_samples(kind):
    level = LEVELS[kind]
    for s in range(50 if kind != QUATERNIONIC else 20):
        M = congruence_sample(level, s)
        assert congruence_member(M, level)
        assert not M.is_identity()
    assert not congruence_member(j_element(kind), level)
    assert congruence_member(identity_element(kind), level)


@pytest.mark.parametrize("kind", KINDS)
def test_normality(kind):
    level = LEVELS[kind]
    for s in range(50 if kind != QUATERNIONIC else 15):
        T = congruence_sample(level, s)
        W = random_word(kind, 3, 500 + s)
        assert congruence_member(W @ T @ W.inverse(), level)


def test_level_mismatch():
    with pytest.raises(ValueError):
        congruence_member(identity_element(UNITARY_GAUSS), "sqrt-3")


@pytest.mark.parametrize("kind", KINDS)
def test_json_roundtrip(kind):
    M = random_word(kind, 4, 7)
    assert GroupElement.from_json(M.to_json()) == M


def test_signed_permutations():
    perms = SignedPermutation.all()
    assert len(perms) == 24 * 8
    with pytest.raises(InvalidElementError):
        SignedPermutation((0, 1, 2, 3), (-1, 1, 1, 1))
    a, b = perms[17], perms[101]
    x = np.arange(1.0, 5.0)
    assert np.array_equal(a.compose(b).apply(x), a.apply(b.apply(x)))


def test_s3_maps_exact():
    basis = [Quaternion(*np.eye(4, dtype=int)[k]) for k in range(4)]
    for x in basis + [Quaternion(1, 2, -3, 5) / 7]:
        assert sigma_map(sigma_map(sigma_map(x))) == x
        assert tau_map(tau_map(x)) == conj_by_i1(x)
        assert tau_map(sigma_map(tau_map(x))) == sigma_map(sigma_map(x))
    assert any(sigma_map(x) != x for x in basis)


def test_tau_squared_element_in_congruence_group():
    M = s3_quotient_maps().tau_squared_element
    assert M == scalar_element(QUATERNIONIC, I1)
    assert congruence_member(M, "p")
    # omega E is not congruent to E modulo p
    from vvforms.arith import HURWITZ_OMEGA

    assert not congruence_member(scalar_element(QUATERNIONIC, HURWITZ_OMEGA), "p")


def test_s3_point_maps_agree_with_quaternion_maps(rng):
    maps = s3_quotient_maps()
    z = rng.normal(size=4)
    Z = np.concatenate([[1j, 2j], z]).astype(complex)
    expect = [float(c) for c in sigma_map(Quaternion(*z)).coeffs]
    assert np.allclose(maps.sigma_point(Z)[2:], expect)
    expect = [float(c) for c in tau_map(Quaternion(*z)).coeffs]
    assert np.allclose(maps.tau_point(Z)[2:], expect)
