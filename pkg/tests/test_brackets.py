import itertools

import numpy as np
import pytest
import sympy

from vvforms.brackets import (
    REDUCTION_SIGN,
    DegenerateError,
    Polynomial,
    WeightedForm,
    bracket,
    bracket_det,
    bracket_matrix,
    polynomial_form,
    quotient_form,
    random_polynomial_form,
    reduction_identity_residual,
    reduction_identity_sides,
    theta_form,
    theta_square_form,
    three_term_residual,
)
from vvforms.halfplane import random_hermitian_point, random_quaternionic_point
from vvforms.harness import fd_jacobian
from vvforms.theta import EISENSTEIN, characteristic_table, gauss_generators, phi10


@pytest.fixture(scope="module")
def eis():
    return [theta_form(c) for c in characteristic_table(EISENSTEIN)]


@pytest.fixture(scope="module")
def gauss_sq():
    return [theta_square_form(c) for c in gauss_generators()]


def constant_form(c, weight=1, nvars=6):
    return polynomial_form(Polynomial(np.array([c]), np.zeros((1, nvars), dtype=int)), weight)


def test_polynomial_gradient(rng):
    p = random_polynomial_form(rng, 2).value
    z = random_quaternionic_point(rng)
    assert np.abs(fd_jacobian(lambda x: p(x), z).ravel() - p.grad(z)).max() < 1e-7


def test_self_bracket_vanishes(eis, rng):
    Z = random_hermitian_point(rng)
    assert np.abs(bracket(eis[1], eis[1], Z)).max() == 0


def test_skew_and_bilinear(eis, rng):
    Z = random_hermitian_point(rng)
    f, g = eis[1], eis[2]
    assert np.allclose(bracket(f, g, Z), -bracket(g, f, Z), atol=1e-12)
    c = 0.7 - 2j
    cf = WeightedForm("cf", 1, lambda W: c * f(W), lambda W: c * f.gradient(W))
    assert np.abs(bracket(cf, g, Z) - c * bracket(f, g, Z)).max() < 1e-12


def test_kind_mismatch(eis, rng):
    with pytest.raises(ValueError):
        bracket(eis[0], random_polynomial_form(rng, 1), random_hermitian_point(rng))


def test_quotient_rule(eis, rng):
    f, g = eis[1], eis[2]
    for _ in range(5):
        Z = random_hermitian_point(rng)
        if abs(g(Z)) < 1e-3:
            continue
        q = quotient_form(f, g)
        oracle = g(Z) ** 2 * fd_jacobian(q, Z, 1e-6).reshape(2, 2)
        assert np.abs(bracket(f, g, Z) - oracle).max() < 1e-6 * max(1, np.abs(oracle).max())


def test_three_term_collapse(eis, rng):
    Z = random_hermitian_point(rng)
    assert three_term_residual(eis[0], eis[0], eis[2], Z) == 0.0


def test_three_term_degenerate(rng):
    c = constant_form(1.0)
    with pytest.raises(DegenerateError):
        three_term_residual(c, c, c, random_quaternionic_point(rng))


def test_three_term_eisenstein(eis, rng):
    Z = random_hermitian_point(rng)
    for f, g, h in itertools.permutations(eis, 3):
        assert three_term_residual(f, g, h, Z) < 1e-8


def test_three_term_gauss(gauss_sq, rng):
    Z = random_hermitian_point(rng)
    for f, g, h in itertools.combinations(gauss_sq, 3):
        assert three_term_residual(f, g, h, Z) < 1e-8


def test_three_term_polynomials(rng):
    for _ in range(10):
        f, g, h = (random_polynomial_form(rng, int(rng.integers(1, 4))) for _ in range(3))
        assert three_term_residual(f, g, h, random_quaternionic_point(rng)) < 1e-10


def test_bracket_det_alternating(eis, rng):
    Z = random_hermitian_point(rng)
    D = bracket_det(eis, 0, Z)
    swapped = [eis[0], eis[2], eis[1], eis[3], eis[4]]
    assert bracket_det(swapped, 0, Z) == pytest.approx(-D, rel=1e-12)
    with pytest.raises(ValueError):
        bracket_det(eis[:4], 0, Z)
    assert bracket_matrix(eis, 0, Z).shape == (4, 4)


def test_eisenstein_det_skew(eis, rng):
    for _ in range(5):
        Z = random_hermitian_point(rng)
        D, Dt = bracket_det(eis, 0, Z), bracket_det(eis, 0, Z.T.copy())
        assert abs(D + Dt) < 1e-8 * abs(D)
    S = random_hermitian_point(rng)
    S = (S + S.T) / 2
    scale = np.prod([np.linalg.norm(np.ravel(bracket(eis[0], f, S))) for f in eis[1:]])
    assert abs(bracket_det(eis, 0, S)) < 1e-8 * scale


def test_gauss_quotient_changes_sign(gauss_sq, rng):
    for _ in range(3):
        Z = random_hermitian_point(rng)
        Zt = Z.T.copy()
        q = bracket_det(gauss_sq, 0, Z) / (gauss_sq[0](Z) ** 3 * phi10(Z))
        qt = bracket_det(gauss_sq, 0, Zt) / (gauss_sq[0](Zt) ** 3 * phi10(Zt))
        assert abs(q + qt) < 1e-6 * max(1, abs(q))


def _symbolic_reduction_sign(n: int) -> int:
    """Sign s with f1^(n-1) det(big) = s det(brackets) for generic functions of n variables."""
    xs = sympy.symbols(f"x0:{n}")
    fs = [sympy.Function(f"f{k}")(*xs) for k in range(n)]
    g = sympy.Function("g")(*xs)
    forms = [(f, 1) for f in fs] + [(g, 3)]
    big = sympy.Matrix([[w * f for f, w in forms]] + [[sympy.diff(f, x) for f, _ in forms] for x in xs])
    f1 = fs[0]
    cols = [[w * f * sympy.diff(f1, x) - f1 * sympy.diff(f, x) for x in xs] for f, w in forms[1:]]
    small = sympy.Matrix(cols).T
    lhs = sympy.expand(f1 ** (n - 1) * big.det())
    rhs = sympy.expand(small.det())
    if sympy.simplify(lhs - rhs) == 0:
        return 1
    assert sympy.simplify(lhs + rhs) == 0
    return -1


def test_reduction_sign_symbolic():
    # the sign is (-1)^n for n variables; six variables give +1
    assert _symbolic_reduction_sign(2) == 1
    assert _symbolic_reduction_sign(3) == -1
    assert REDUCTION_SIGN == (-1) ** 6


def test_reduction_identity_random(rng):
    for _ in range(20):
        fs = [random_polynomial_form(rng, 1) for _ in range(6)]
        g = random_polynomial_form(rng, 3)
        assert reduction_identity_residual(fs, g, random_quaternionic_point(rng)) < 1e-8


def test_reduction_constant_forms(rng):
    fs = [constant_form(1.0 + k) for k in range(6)]
    lhs, rhs = reduction_identity_sides(fs, constant_form(2.0, 3), random_quaternionic_point(rng))
    assert lhs == 0 and rhs == 0
    assert reduction_identity_residual(fs, constant_form(2.0, 3), random_quaternionic_point(rng)) == 0.0


def test_reduction_scaling(rng):
    fs = [random_polynomial_form(rng, 1) for _ in range(6)]
    g = random_polynomial_form(rng, 3)
    Z = random_quaternionic_point(rng)
    c = 1.7 + 0.4j
    scaled = WeightedForm("cf", 1, lambda W: c * fs[0](W), lambda W: c * fs[0].gradient(W), kind=fs[0].kind)
    l1, r1 = reduction_identity_sides(fs, g, Z)
    l2, r2 = reduction_identity_sides([scaled, *fs[1:]], g, Z)
    assert l2 / l1 == pytest.approx(c**6, rel=1e-9)
    assert r2 / r1 == pytest.approx(c**6, rel=1e-9)


def test_reduction_rejects_bad_input(rng):
    fs = [random_polynomial_form(rng, 1) for _ in range(6)]
    with pytest.raises(ValueError):
        reduction_identity_sides(fs[:5], random_polynomial_form(rng, 3), random_quaternionic_point(rng))
    zero = constant_form(0.0)
    with pytest.raises(DegenerateError):
        reduction_identity_sides([zero, *fs[1:]], random_polynomial_form(rng, 3), random_quaternionic_point(rng))
