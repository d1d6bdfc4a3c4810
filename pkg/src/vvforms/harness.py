"""Verification harness: samplers, finite-difference oracles and the check registry.

Each check draws from its own generator seeded by ``(seed, crc32(check_id))``,
so any subset of checks reproduces the residuals of the full run.
"""
from __future__ import annotations

import itertools
import json
import math
import os
import time
import zlib
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import arith, groups, halfplane, reps, theta
from .arith import Quaternion
from .brackets import (
    DegenerateError,
    bracket,
    bracket_det,
    random_polynomial_form,
    reduction_identity_residual,
    theta_form,
    theta_square_form,
    three_term_residual,
)
from .groups import QUATERNIONIC, UNITARY_EISENSTEIN, UNITARY_GAUSS
from .halfplane import HalfPlaneError, cz_plus_d, membership_hermitian, moebius
from .reps import AutomorphyFactorSpec, apply_st_tensor_st

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240611
SEED_ENV = "VVFORMS_SEED"

#: Points and their images under a congruence element cannot both reach the
#: 0.4 margin once C has entries of norm 3 or more; automorphy checks use
#: certified evaluation at a smaller margin with a larger radius cap.
AUTOMORPHY_POLICY = theta.TruncationPolicy(tail_bound=1e-12, max_radius=24.0, min_margin=0.2)
SAMPLE_MARGIN = 0.4


# --- oracles ---------------------------------------------------------------------


def fd_jacobian(fn: Callable, Z, step: float = 1e-5) -> np.ndarray:
    """Central-difference complex Jacobian in the flattened coordinate order of Z.

    On a half-plane failure the step is halved once before giving up.
    """
    Z = np.asarray(Z, dtype=complex)
    n = Z.size
    for h in (step, step / 2):
        try:
            cols = []
            for k in range(n):
                e = np.zeros(n, dtype=complex)
                e[k] = h
                e = e.reshape(Z.shape)
                hi, lo = Z + e, Z - e
                # divide by the step actually realised in floating point
                actual = (hi - lo).flat[k]
                cols.append(np.ravel(np.asarray(fn(hi)) - np.asarray(fn(lo))) / actual)
            return np.column_stack(cols)
        except HalfPlaneError:
            continue
    raise HalfPlaneError("finite differences left the half-plane")


# --- automorphy ----------------------------------------------------------------------


@dataclass(frozen=True)
class VectorForm:
    """A 2x2-valued function transforming with det factors and St (x) St."""

    label: str
    weight: int
    value: Callable
    character: str = "det^r"


def bracket_form(f, g) -> VectorForm:
    """{f, g} as coefficients of tr(F dZ), i.e. the transposed gradient layout."""
    return VectorForm(f"{{{f.label}, {g.label}}}", f.weight + g.weight, lambda Z: bracket(f, g, Z).T)


@dataclass
class AutomorphyResult:
    residual: float
    passed: bool
    lhs: complex | np.ndarray = field(repr=False)
    rhs: complex | np.ndarray = field(repr=False)


def check_automorphy(form, spec: AutomorphyFactorSpec, M, Z, tol: float = 1e-8) -> AutomorphyResult:
    """Residual of f(MZ) = J(M, Z) f(Z), normalised by max(1, |f(MZ)|)."""
    Mc = np.asarray(getattr(M, "complex_image", M), dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    W = moebius(Mc, Z)
    det_m = complex(np.linalg.det(Mc))
    P = cz_plus_d(Mc, Z)
    scalar = spec.scalar_factor(det_m, complex(np.linalg.det(P)))
    lhs = form.value(W)
    if spec.representation == "st-st":
        C, D = Mc[2:, :2], Mc[2:, 2:]
        rhs = scalar * apply_st_tensor_st(P, C.conj() @ Z.T + D.conj(), form.value(Z))
    elif spec.representation == "trivial":
        rhs = scalar * form.value(Z)
    else:
        raise ValueError("rho-jac forms are not evaluated by this harness")
    res = float(np.linalg.norm(np.asarray(lhs) - rhs) / max(1.0, np.linalg.norm(lhs)))
    return AutomorphyResult(res, res <= tol, lhs, rhs)


def _flat8(Z):
    return np.concatenate([[z.real, z.imag] for z in Z.ravel()])


def _unflat8(x):
    return (x[0::2] + 1j * x[1::2]).reshape(2, 2)


def _pair_margin(Mc, Z) -> float:
    P = cz_plus_d(Mc, Z)
    if 1 / np.linalg.cond(P) < 1e-10:
        return -1.0
    W = halfplane.moebius_matrix(Mc, Z)
    return min(membership_hermitian(Z)[1], membership_hermitian(W)[1], 1.0)


def points_for_element(M, rng, count: int, min_margin: float, starts: int = 4):
    """Points Z with Z and MZ both at least ``min_margin`` inside, or None.

    A Nelder-Mead search maximises min(margin Z, margin MZ) (capped at 1);
    the points are small random perturbations of the optimum.
    """
    Mc = M.complex_image
    best, best_Z = -1.0, None
    for _ in range(starts):
        x0 = _flat8(halfplane.random_hermitian_point(rng, SAMPLE_MARGIN))
        r = minimize(lambda x: -_pair_margin(Mc, _unflat8(x)), x0, method="Nelder-Mead", options={"maxiter": 600})
        if -r.fun > best:
            best, best_Z = -r.fun, _unflat8(r.x)
        if best >= min_margin + 0.05:
            break
    if best < min_margin:
        return None
    pts = []
    for _ in range(50 * count):
        D = rng.normal(scale=0.03, size=(2, 2)) + 1j * rng.normal(scale=0.03, size=(2, 2))
        if _pair_margin(Mc, best_Z + D) >= min_margin:
            pts.append(best_Z + D)
            if len(pts) == count:
                return pts
    return None


def automorphy_pairs(level: str, rng, n_elements: int, n_points: int, min_margin: float = AUTOMORPHY_POLICY.min_margin):
    """(M, [Z...]) pairs from congruence samples; elements without usable points are skipped."""
    out, rejected = [], 0
    while len(out) < n_elements:
        M = groups.congruence_sample(level, int(rng.integers(2**32)))
        pts = points_for_element(M, rng, n_points, min_margin)
        if pts is None:
            rejected += 1
            if rejected > 20 * n_elements:
                raise RuntimeError("could not find usable points for congruence samples")
            continue
        out.append((M, pts))
    return out, rejected


# --- check registry --------------------------------------------------------------------


@dataclass
class CheckOutcome:
    residual: float
    samples: int
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Check:
    id: str
    suite: str
    anchor: str
    tolerance: float
    fn: Callable[[np.random.Generator], CheckOutcome] = field(repr=False)


REGISTRY: dict[str, Check] = {}


def check(id: str, suite: str, anchor: str, tolerance: float):
    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate check id {id}")
        REGISTRY[id] = Check(id, suite, anchor, tolerance, fn)
        return fn

    return deco


def _rng_for(seed: int, check_id: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(check_id.encode())])


def _point(rng):
    return halfplane.random_hermitian_point(rng, SAMPLE_MARGIN)


def _rational(rng, denom: int = 4) -> Fraction:
    return Fraction(int(rng.integers(-3 * denom, 3 * denom + 1)), denom)


def _random_quaternion(rng, denom: int = 4) -> Quaternion:
    return Quaternion(*(_rational(rng, denom) for _ in range(4)))


def _random_hurwitz(rng) -> Quaternion:
    half = bool(rng.integers(2))
    c = rng.integers(-3, 4, size=4)
    return Quaternion(*((Fraction(int(x)) + (Fraction(1, 2) if half else 0)) for x in c))


# arithmetic ----------------------------------------------------------------------


@check("arith-relations", "arith", "i1^2 = i2^2 = -1, i1 i2 = -i2 i1 = i3, omega^3 = -1", 0.0)
def _arith_relations(rng):
    I1, I2, I3 = arith.I1, arith.I2, arith.I3
    m1 = -arith.ONE
    failures = 0
    for lhs, rhs in [
        (I1 * I1, m1), (I2 * I2, m1), (I3 * I3, m1),
        (I1 * I2, I3), (I2 * I1, -I3), (I2 * I3, I1), (I3 * I2, -I1), (I3 * I1, I2), (I1 * I3, -I2),
        (arith.HURWITZ_OMEGA * arith.HURWITZ_OMEGA * arith.HURWITZ_OMEGA, m1),
    ]:
        failures += lhs != rhs
    w = arith.ImagQuadInt(0, 1, arith.EISENSTEIN)
    failures += (w * w * w) != arith.iq(1, 0, arith.EISENSTEIN)
    return CheckOutcome(float(failures), 11)


@check("arith-hurwitz-closure", "arith", "Hurwitz order closed under +, *, conjugation", 0.0)
def _arith_hurwitz(rng):
    failures = 0
    n = 200
    for _ in range(n):
        a, b = _random_hurwitz(rng), _random_hurwitz(rng)
        failures += not (arith.is_hurwitz(a * b) and arith.is_hurwitz(a + b) and arith.is_hurwitz(a.conj()))
        failures += a.norm().denominator != 1
    failures += len(arith.hurwitz_units()) != 24
    failures += any(u.norm() != 1 for u in arith.hurwitz_units())
    return CheckOutcome(float(failures), n)


@check("arith-check-homomorphism", "arith", "check(xy) = check(x) check(y), check(conj x) = J2 check(x)^T J2^-1", 1e-12)
def _arith_check(rng):
    worst = 0.0
    for _ in range(100):
        a, b = _random_quaternion(rng), _random_quaternion(rng)
        ea, eb = arith.check_embed(a), arith.check_embed(b)
        worst = max(
            worst,
            np.abs(arith.check_embed(a * b) - ea @ eb).max(),
            np.abs(arith.check_embed(a + b) - (ea + eb)).max(),
            np.abs(arith.check_embed(a.conj()) - reps._J2 @ ea.T @ np.linalg.inv(reps._J2)).max(),
        )
    return CheckOutcome(float(worst), 100)


# unitary groups ------------------------------------------------------------------


def _unitary_cases(rng, n_words: int, n_points: int):
    for i in range(n_words):
        kind = (UNITARY_EISENSTEIN, UNITARY_GAUSS)[i % 2]
        M = groups.random_word(kind, int(rng.integers(1, 7)), rng)
        for _ in range(n_points):
            yield M, _point(rng)


@check("lemma-detAB", "unitary", "det(CZ+D) = det M det(conj(C) Z' + conj(D))", 1e-9)
def _lemma_det(rng):
    worst, n = 0.0, 0
    for M, Z in _unitary_cases(rng, 50, 3):
        Mc = M.complex_image
        C, D = Mc[2:, :2], Mc[2:, 2:]
        lhs = np.linalg.det(C @ Z + D)
        rhs = M.det * np.linalg.det(C.conj() @ Z.T + D.conj())
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        n += 1
    return CheckOutcome(float(worst), n)


@check("lemma-jacU-fd", "unitary", "dZ -> ((conj(C) Z' + conj(D))')^-1 dZ (CZ+D)^-1", 1e-5)
def _lemma_jac_fd(rng):
    worst = 0.0
    n = 0
    for M, Z in _unitary_cases(rng, 20, 1):
        J = reps.jac_hermitian(M, Z).matrix
        F = fd_jacobian(lambda X: moebius(M, X, check=False), Z)
        worst = max(worst, np.abs(F - J).max())
        n += 1
    return CheckOutcome(float(worst), n)


@check("lemma-jacU-det", "unitary", "det Jac = det M^2 det(CZ+D)^-4", 1e-9)
def _lemma_jac_det(rng):
    worst, n = 0.0, 0
    for M, Z in _unitary_cases(rng, 50, 1):
        J = reps.jac_hermitian(M, Z)
        expect = M.det**2 * np.linalg.det(cz_plus_d(M.complex_image, Z)) ** -4
        worst = max(worst, abs(J.det - expect) / abs(expect))
        n += 1
    return CheckOutcome(float(worst), n)


# Eisenstein thetas ------------------------------------------------------------------------


def _theta_automorphy(rng, level: str, forms, spec: AutomorphyFactorSpec, n_elements: int, n_points: int):
    pairs, rejected = automorphy_pairs(level, rng, n_elements, n_points)
    worst, n = 0.0, 0
    for M, pts in pairs:
        for Z in pts:
            for f in forms:
                worst = max(worst, check_automorphy(f, spec, M, Z).residual)
                n += 1
    return CheckOutcome(float(worst), n, {"rejected_elements": rejected, "policy": asdict(AUTOMORPHY_POLICY)})


def _eisenstein_forms(policy=theta.DEFAULT_POLICY):
    return [theta_form(c, policy) for c in theta.characteristic_table(theta.EISENSTEIN)]


def _gauss_generator_squares(policy=theta.DEFAULT_POLICY):
    return [theta_square_form(c, policy) for c in theta.gauss_generators()]


@check("eis-theta-automorphy", "eisenstein", "f(MZ)=det M^r det(CZ+D)^r f(Z)", 1e-8)
def _eis_automorphy(rng):
    return _theta_automorphy(rng, "sqrt-3", _eisenstein_forms(AUTOMORPHY_POLICY), AutomorphyFactorSpec(1), 20, 5)


@check("eis-theta-symmetry", "eisenstein", "Theta_p(Z') = Theta_p(Z)", 1e-10)
def _eis_symmetry(rng):
    worst, n = 0.0, 0
    for _ in range(10):
        Z = _point(rng)
        for f in _eisenstein_forms():
            a, b = f(Z), f(Z.T.copy())
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
            n += 1
    return CheckOutcome(float(worst), n)


def _three_term_check(rng, forms, n_points: int):
    worst, n, degenerate = 0.0, 0, 0
    for _ in range(n_points):
        Z = _point(rng)
        for f, g, h in itertools.combinations(forms, 3):
            try:
                worst = max(worst, three_term_residual(f, g, h, Z))
                n += 1
            except DegenerateError:
                degenerate += 1
    return CheckOutcome(float(worst), n, {"degenerate": degenerate})


@check("thm-MTa-relations", "eisenstein", "three-term relations among Theta_1..Theta_5", 1e-8)
def _mta(rng):
    return _three_term_check(rng, _eisenstein_forms(), 5)


def _skew(a: complex, b: complex) -> float:
    return abs(a + b) / max(1.0, abs(a))


@check("lemma-detsym-skew", "eisenstein", "D = c Theta_1^3 phi_9 with phi_9 skew", 1e-8)
def _detsym_skew(rng):
    forms = _eisenstein_forms()
    worst = 0.0
    for _ in range(10):
        Z = _point(rng)
        D, Dt = bracket_det(forms, 0, Z), bracket_det(forms, 0, Z.T.copy())
        worst = max(worst, abs(D + Dt) / max(abs(D), abs(Dt), 1e-300))
    return CheckOutcome(float(worst), 10)


@check("lemma-detsym-quotient", "eisenstein", "D = c Theta_1^3 phi_9 with phi_9 skew", 1e-6)
def _detsym_quotient(rng):
    forms = _eisenstein_forms()
    worst, n, skipped = 0.0, 0, 0
    base = None
    while n < 10:
        Z = _point(rng)
        Zt = Z.T.copy()
        t, tt = forms[0](Z), forms[0](Zt)
        if min(abs(t), abs(tt)) <= 1e-3:
            skipped += 1
            continue
        q = bracket_det(forms, 0, Z) / t**3
        qt = bracket_det(forms, 0, Zt) / tt**3
        base = q if base is None else base
        worst = max(worst, _skew(q, qt))
        n += 1
    return CheckOutcome(float(worst), n, {"skipped": skipped, "base_value": [base.real, base.imag]})


# Gauss thetas -------------------------------------------------------------------------------


@check("gauss-theta-automorphy", "gauss", "f(MZ)=det M^{r/2}det(CZ+D)^r f(Z)", 1e-8)
def _gauss_automorphy(rng):
    forms = [theta_square_form(c, AUTOMORPHY_POLICY) for c in theta.characteristic_table(theta.GAUSS)]
    return _theta_automorphy(rng, "1+i", forms, AutomorphyFactorSpec(2, "det^r/2"), 20, 5)


@check("thm-MTb-relations", "gauss", "three-term relations among Theta(1)^2..Theta(5)^2", 1e-8)
def _mtb(rng):
    return _three_term_check(rng, _gauss_generator_squares(), 5)


@check("lemma-detsymG-quotient", "gauss", "D = c Theta(1)^6 phi_4 phi_10 with phi_4 skew", 1e-6)
def _detsym_gauss(rng):
    forms = _gauss_generator_squares()

    def quotient(Z):
        return bracket_det(forms, 0, Z) / (forms[0](Z) ** 3 * theta.phi10(Z))

    worst = 0.0
    for _ in range(10):
        Z = _point(rng)
        worst = max(worst, _skew(quotient(Z), quotient(Z.T.copy())))
    return CheckOutcome(float(worst), 10)


@check("gauss-phi10-symmetry", "gauss", "phi_10 = product of the ten Theta[m], symmetric", 1e-8)
def _phi10_sym(rng):
    worst = 0.0
    for _ in range(10):
        Z = _point(rng)
        a, b = theta.phi10(Z), theta.phi10(Z.T.copy())
        worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
    return CheckOutcome(float(worst), 10)


LOCI = {"z12=i*z21": False, "z21=i*z12": True}


def vanishing_table(rng, n_points: int = 20) -> dict[str, dict[str, float]]:
    """Max modulus of each Gauss theta on each candidate locus."""
    table = {}
    chars = theta.characteristic_table(theta.GAUSS)
    for name, swap in LOCI.items():
        pts = [halfplane.random_point_on_locus(rng, 1j, swap, SAMPLE_MARGIN) for _ in range(n_points)]
        table[name] = {str(c.data): max(abs(theta.theta_eval(c, Z)) for Z in pts) for c in chars}
    return table


@check("gauss-vanishing-locus", "gauss", "Theta[m] vanishing on z12 = i z21 or z21 = i z12", 1e-6)
def _vanishing(rng):
    table = vanishing_table(rng)
    small = [(locus, ch, v) for locus, row in table.items() for ch, v in row.items() if v < 1e-6]
    others = [v for row in table.values() for v in row.values() if v >= 1e-6]
    unique = len(small) == 1 and all(v > 1e-3 for v in others)
    residual = small[0][2] if unique else math.inf
    return CheckOutcome(residual, 20 * len(LOCI), {"vanishing_pairs": [[l, c] for l, c, _ in small], "table": table})


# rho_Jac --------------------------------------------------------------------------------------


def _bounded_matrix(rng, bound: float = 2.0):
    return rng.uniform(-bound, bound, (4, 4)) + 1j * rng.uniform(-bound, bound, (4, 4))


@check("rhojac-multiplicative", "quaternionic", "rho_Jac(AB) = rho_Jac(A) rho_Jac(B)", 1e-10)
def _rho_mult(rng):
    worst = 0.0
    for _ in range(100):
        A, B = _bounded_matrix(rng) / 2, _bounded_matrix(rng) / 2
        R = reps.rho_jac(A @ B)
        worst = max(worst, np.abs(R - reps.rho_jac(A) @ reps.rho_jac(B)).max() / max(1.0, np.abs(R).max()))
    return CheckOutcome(float(worst), 100)


def quaternion_hermitian_product(U, W):
    """U W U^* for 2x2 quaternion matrices (object arrays), exactly."""
    return groups.matmul(groups.matmul(U, W), groups.conj_transpose(U))


def _slice_coords(W) -> np.ndarray:
    return np.array([float(W[0, 0].x0), float(W[1, 1].x0), *(float(c) for c in W[0, 1].coeffs)])


@check("rhojac-real-form", "quaternionic", "rho_Jac(check U) = rho(U): W -> U W U*", 1e-12)
def _rho_real(rng):
    worst = 0.0
    for _ in range(50):
        U = np.array([[_random_quaternion(rng) for _ in range(2)] for _ in range(2)], dtype=object)
        w1 = _random_quaternion(rng)
        W = np.array([[Quaternion(_rational(rng)), w1], [w1.conj(), Quaternion(_rational(rng))]], dtype=object)
        exact = _slice_coords(quaternion_hermitian_product(U, W))
        numeric = reps.rho_jac(arith.check_embed(U)) @ _slice_coords(W)
        worst = max(worst, np.abs(numeric - exact).max() / max(1.0, np.abs(exact).max()))
    return CheckOutcome(float(worst), 50)


@check("rhojac-slice", "quaternionic", "rho_Jac: GL(4,C) -> GL(Z_2)", 1e-10)
def _rho_slice(rng):
    worst = 0.0
    for _ in range(50):
        A = _bounded_matrix(rng)
        As = reps.star(A)
        for k in range(6):
            worst = max(worst, halfplane.slice_residual(A @ halfplane.PACK_BASIS[k] @ As))
    return CheckOutcome(float(worst), 300)


@check("rhojac-unipotent", "quaternionic", "E11 fixed by unipotent upper-triangular A", 1e-10)
def _rho_unipotent(rng):
    worst = 0.0
    e0 = np.eye(6)[:, 0]
    for _ in range(50):
        A = np.triu(_bounded_matrix(rng), 1) + np.eye(4)
        worst = max(worst, np.abs(reps.rho_jac(A) @ e0 - e0).max())
    return CheckOutcome(float(worst), 50)


@check("rhojac-diagonal", "quaternionic", "highest weight (1,1,0,0)", 1e-12)
def _rho_diag(rng):
    worst = 0.0
    for _ in range(50):
        d = rng.uniform(0.5, 2, 4) * np.exp(2j * np.pi * rng.uniform(size=4))
        col = reps.rho_jac(np.diag(d))[:, 0]
        expect = np.zeros(6, dtype=complex)
        expect[0] = d[0] * d[1]
        worst = max(worst, np.abs(col - expect).max())
        c = d[0]
        worst = max(worst, np.abs(reps.rho_jac(c * np.eye(4)) - c**2 * np.eye(6)).max())
    return CheckOutcome(float(worst), 100)


def slice_dimension() -> int:
    """Exact dimension of {W : W* = W} inside 4x4 complex matrices."""
    import sympy

    J2 = sympy.Matrix([[0, -1], [1, 0]])
    Jt = sympy.diag(J2, J2)
    cols = []
    for k in range(16):
        E = sympy.zeros(4, 4)
        E[k // 4, k % 4] = 1
        cols.append(list(E - Jt * E.T * Jt.inv()))
    return 16 - sympy.Matrix(cols).T.rank()


@check("rhojac-dimension", "quaternionic", "dim Z_n = 2 + 2n(n-1)", 0.0)
def _rho_dim(rng):
    n = 2
    dim = slice_dimension()
    return CheckOutcome(float(abs(dim - 6) + abs(dim - (2 + 2 * n * (n - 1)))), 1, {"dimension": dim})


def _quaternionic_cases(rng, count: int):
    for _ in range(count):
        M = groups.random_word(QUATERNIONIC, int(rng.integers(1, 7)), rng)
        Z = halfplane.random_quaternionic_point(rng, SAMPLE_MARGIN)
        yield M, Z


@check("lemma-jacrho-fd", "quaternionic", "Jac(M,Z) = rho_Jac(CZ+D)^-1", 1e-5)
def _jacrho_fd(rng):
    worst = 0.0
    for M, Z in _quaternionic_cases(rng, 20):
        J = reps.jac_quaternionic(M, Z)
        F = fd_jacobian(lambda X: moebius(M, X, check=False), Z)
        worst = max(worst, np.abs(F - J).max())
    return CheckOutcome(float(worst), 20)


@check("lemma-jacrho-det", "quaternionic", "det Jac(M,Z) = det(CZ+D)^-3", 1e-8)
def _jacrho_det(rng):
    worst = 0.0
    for M, Z in _quaternionic_cases(rng, 30):
        P = cz_plus_d(M.complex_image, halfplane.quat_pack(Z))
        expect = np.linalg.det(P) ** -3
        worst = max(worst, abs(np.linalg.det(reps.jac_quaternionic(M, Z)) - expect) / abs(expect))
    return CheckOutcome(float(worst), 30)


@check("lemma-normal-s3", "quaternionic", "sigma^3 = tau^2 = 1, tau sigma tau = sigma^-1 modulo Gamma[p]", 0.0)
def _normal_s3(rng):
    maps = groups.s3_quotient_maps()
    s, t = maps.sigma, maps.tau
    basis = [arith.ONE, arith.I1, arith.I2, arith.I3]
    failures = 0
    samples = basis + [_random_quaternion(rng) for _ in range(20)]
    for x in samples:
        failures += s(s(s(x))) != x
        failures += t(t(x)) != groups.conj_by_i1(x)
        failures += t(s(t(x))) != s(s(x))
    # sigma and tau are not the identity, and tau is not a power of sigma
    failures += all(s(x) == x for x in basis)
    failures += any(all(t(x) == p(x) for x in basis) for p in (lambda y: y, s, lambda y: s(s(y))))
    M = maps.tau_squared_element
    failures += not groups.congruence_member(M, "p")
    failures += M.is_identity()
    return CheckOutcome(float(failures), len(samples))


# brackets ------------------------------------------------------------------------------------


@check("lemma-jac-reduction", "brackets", "f1^5 det[w f; grad f] = det({f1,f2} ... {f1,g})", 1e-8)
def _jac_reduction(rng):
    worst, n = 0.0, 0
    while n < 20:
        fs = [random_polynomial_form(rng, 1, label=f"f{k}") for k in range(6)]
        g = random_polynomial_form(rng, 3, label="g")
        Z = halfplane.random_quaternionic_point(rng, SAMPLE_MARGIN)
        try:
            worst = max(worst, reduction_identity_residual(fs, g, Z))
        except DegenerateError:
            continue
        n += 1
    return CheckOutcome(float(worst), n)


@check("bracket-three-term-generic", "brackets", "wt(h)h{f,g}=wt(g)g{f,h}+wt(f)f{h,g}", 1e-10)
def _three_term_generic(rng):
    worst, n = 0.0, 0
    while n < 20:
        f, g, h = (random_polynomial_form(rng, int(rng.integers(1, 4))) for _ in range(3))
        Z = halfplane.random_quaternionic_point(rng, SAMPLE_MARGIN)
        try:
            worst = max(worst, three_term_residual(f, g, h, Z))
        except DegenerateError:
            continue
        n += 1
    return CheckOutcome(float(worst), n)


@check("bracket-automorphy", "brackets", "{f,g}(MZ) = det M^2 det(CZ+D)^2 (CZ+D) {f,g}(Z) (conj(C) Z' + conj(D))'", 1e-6)
def _bracket_automorphy(rng):
    forms = _eisenstein_forms(AUTOMORPHY_POLICY)
    spec = AutomorphyFactorSpec(2, "det^r", "st-st")
    pairs, rejected = automorphy_pairs("sqrt-3", rng, 10, 1)
    worst, n = 0.0, 0
    for M, pts in pairs:
        for i, j in itertools.combinations(range(len(forms)), 2):
            for Z in pts:
                worst = max(worst, check_automorphy(bracket_form(forms[i], forms[j]), spec, M, Z).residual)
                n += 1
    return CheckOutcome(float(worst), n, {"rejected_elements": rejected})


# truncation ----------------------------------------------------------------------------------


@check("theta-truncation", "theta", "certified tail bound of the truncated theta sum", 1.0)
def _truncation(rng):
    """Residual is |adaptive - brute force| divided by the declared tail bound."""
    worst, n = 0.0, 0
    for case in (theta.EISENSTEIN, theta.GAUSS):
        chars = theta.characteristic_table(case)
        for _ in range(10):
            Z = _point(rng)
            ch = chars[int(rng.integers(len(chars)))]
            value, grad, bound, radius = theta.theta_with_gradient(ch, Z)
            ref, _ = theta.theta_bruteforce(ch, Z, int(math.ceil(radius)) + 3)
            worst = max(worst, abs(value - ref) / bound)
            n += 1
    return CheckOutcome(float(worst), n)


SUITES = tuple(dict.fromkeys(c.suite for c in REGISTRY.values()))


# --- running and reporting ---------------------------------------------------------------------


@dataclass
class CheckRecord:
    id: str
    anchor: str
    suite: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    seed: int
    details: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    seed: int | None = None
    suites: list[str] | None = None
    checks: list[str] | None = None
    tol_scale: float = 1.0

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        unknown = set(data) - {"seed", "suites", "checks", "tol_scale"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def resolve_seed(explicit: int | None) -> tuple[int, str]:
    if explicit is not None:
        return int(explicit), "explicit"
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env), "environment"
    return DEFAULT_SEED, "default"


def select_checks(config: RunConfig) -> list[Check]:
    ids = list(REGISTRY)
    if config.suites:
        bad = set(config.suites) - set(SUITES)
        if bad:
            raise ValueError(f"unknown suites: {sorted(bad)}")
        ids = [i for i in ids if REGISTRY[i].suite in config.suites]
    if config.checks:
        bad = set(config.checks) - set(REGISTRY)
        if bad:
            raise ValueError(f"unknown check ids: {sorted(bad)}")
        ids = [i for i in ids if i in config.checks]
    return [REGISTRY[i] for i in ids]


def run_check(chk: Check, seed: int, tol_scale: float = 1.0) -> CheckRecord:
    out = chk.fn(_rng_for(seed, chk.id))
    tol = chk.tolerance * tol_scale
    residual = float(out.residual)
    return CheckRecord(chk.id, chk.anchor, chk.suite, out.samples, residual, tol, bool(residual <= tol), seed, out.details)


def run_suite(config: RunConfig | None = None) -> dict:
    config = config or RunConfig()
    seed, source = resolve_seed(config.seed)
    records, timing = [], {}
    for chk in select_checks(config):
        t0 = time.perf_counter()
        records.append(run_check(chk, seed, config.tol_scale))
        timing[chk.id] = round(time.perf_counter() - t0, 3)
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": ",".join(config.suites) if config.suites else "all",
        "seed": seed,
        "seed_source": source,
        "environment": {
            "precision": "float64",
            "tol_scale": config.tol_scale,
            "policy": asdict(theta.DEFAULT_POLICY),
            "automorphy_policy": asdict(AUTOMORPHY_POLICY),
            "numpy": np.__version__,
        },
        "checks": [asdict(r) for r in records],
        "passed": all(r.passed for r in records),
        "timing": timing,
    }


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps_report(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False)


def format_report(report: dict) -> str:
    lines = [f"seed {report['seed']} ({report['seed_source']}), tol scale {report['environment']['tol_scale']}"]
    for r in report["checks"]:
        status = "PASS" if r["passed"] else "FAIL"
        lines.append(f"{status}  {r['id']:<28} residual {float(r['max_residual']):.3e}  tol {r['tolerance']:.1e}  n={r['samples']}")
    n_pass = sum(r["passed"] for r in report["checks"])
    lines.append(f"{n_pass}/{len(report['checks'])} checks passed")
    return "\n".join(lines)
