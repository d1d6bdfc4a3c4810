"""Brackets of weighted scalar forms.

For forms f, g of weights wt(f), wt(g) the bracket is the vector-valued
function ``{f, g} = wt(g) g grad(f) - wt(f) f grad(g)``.  Gradients are taken
in the point's own coordinates: a 2x2 matrix of d/dz_jk for hermitian points
and a 6-vector for quaternionic coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .theta import DEFAULT_POLICY, ThetaCharacteristic, TruncationPolicy, theta_with_gradient

HERMITIAN = "hermitian"
QUATERNIONIC = "quaternionic"

# f1^5 det(7x7) = REDUCTION_SIGN * det(6x6); fixed by eliminating the first row
# with the column operations c_k -> f1 c_k - w_k f_k c_1.
REDUCTION_SIGN = 1


class DegenerateError(ArithmeticError):
    """Every term of an identity is numerically zero, so no residual is meaningful."""


@dataclass(frozen=True)
class WeightedForm:
    label: str
    weight: int
    value: Callable[[np.ndarray], complex] = field(repr=False)
    gradient: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    kind: str = HERMITIAN
    character: str = "det^r"

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("weights are positive integers")

    def __call__(self, Z) -> complex:
        return self.value(Z)


def theta_form(ch: ThetaCharacteristic, policy: TruncationPolicy = DEFAULT_POLICY) -> WeightedForm:
    """A theta constant as a weight-1 form."""
    return WeightedForm(
        label=ch.label,
        weight=1,
        value=lambda Z: complex(theta_with_gradient(ch, Z, policy)[0]),
        gradient=lambda Z: theta_with_gradient(ch, Z, policy)[1],
        character="det^r",
    )


def theta_square_form(ch: ThetaCharacteristic, policy: TruncationPolicy = DEFAULT_POLICY) -> WeightedForm:
    """The square of a theta series as a weight-2 form."""

    def value(Z):
        return complex(theta_with_gradient(ch, Z, policy)[0]) ** 2

    def gradient(Z):
        v, g, *_ = theta_with_gradient(ch, Z, policy)
        return 2 * v * g

    return WeightedForm(label=f"({ch.label})^2", weight=2, value=value, gradient=gradient, character="det^r/2")


def quotient_form(f: WeightedForm, g: WeightedForm) -> Callable:
    """Value of f/g; used as an oracle for brackets through the quotient rule."""
    return lambda Z: f(Z) / g(Z)


@dataclass(frozen=True)
class Polynomial:
    """Sum of c_k prod_i z_i^{e_ki} over flattened point coordinates."""

    coeffs: np.ndarray
    exponents: np.ndarray

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=complex).ravel()
        return complex(np.sum(self.coeffs * np.prod(z ** self.exponents, axis=1)))

    def grad(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.zeros(flat.size, dtype=complex)
        for i in range(flat.size):
            e = self.exponents.copy()
            pref = e[:, i].astype(float)
            e[:, i] = np.maximum(e[:, i] - 1, 0)
            out[i] = np.sum(self.coeffs * pref * np.prod(flat**e, axis=1))
        return out.reshape(z.shape)


def random_polynomial(rng: np.random.Generator, nvars: int, degree: int = 3, terms: int = 6) -> Polynomial:
    exps = rng.integers(0, degree + 1, size=(terms, nvars))
    exps[0] = 0  # keeps a constant term so values stay away from zero
    coeffs = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    coeffs[0] += 2.0
    return Polynomial(coeffs / terms, exps)


def polynomial_form(poly: Polynomial, weight: int, kind: str = QUATERNIONIC, label: str = "poly") -> WeightedForm:
    return WeightedForm(label=label, weight=weight, value=poly, gradient=poly.grad, kind=kind, character="trivial")


def random_polynomial_form(rng, weight: int, kind: str = QUATERNIONIC, label: str = "poly") -> WeightedForm:
    nvars = 6 if kind == QUATERNIONIC else 4
    return polynomial_form(random_polynomial(rng, nvars), weight, kind, label)


# --- brackets -------------------------------------------------------------------


def bracket(f: WeightedForm, g: WeightedForm, Z) -> np.ndarray:
    if f.kind != g.kind:
        raise ValueError(f"forms live on different half-planes ({f.kind}, {g.kind})")
    return g.weight * g(Z) * f.gradient(Z) - f.weight * f(Z) * g.gradient(Z)


def three_term_residual(f: WeightedForm, g: WeightedForm, h: WeightedForm, Z) -> float:
    """Relative size of wt(h)h{f,g} - wt(g)g{f,h} - wt(f)f{h,g}."""
    lhs = h.weight * h(Z) * bracket(f, g, Z)
    t1 = g.weight * g(Z) * bracket(f, h, Z)
    t2 = f.weight * f(Z) * bracket(h, g, Z)
    scale = max(np.linalg.norm(lhs), np.linalg.norm(t1), np.linalg.norm(t2))
    if scale < 1e-12:
        raise DegenerateError("all three terms vanish")
    return float(np.linalg.norm(lhs - t1 - t2) / scale)


def bracket_matrix(family: list[WeightedForm], pivot: int, Z) -> np.ndarray:
    """Columns are the flattened brackets {pivot, other} in family order."""
    p = family[pivot]
    cols = [np.ravel(bracket(p, f, Z)) for i, f in enumerate(family) if i != pivot]
    return np.column_stack(cols)


def bracket_det(family: list[WeightedForm], pivot: int, Z) -> complex:
    M = bracket_matrix(family, pivot, Z)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"need {M.shape[0] + 1} forms for a square bracket matrix, got {len(family)}")
    return complex(np.linalg.det(M))


def reduction_identity_sides(fs: list[WeightedForm], g: WeightedForm, Z) -> tuple[complex, complex]:
    """(f1^5 det of the 7x7 value/gradient matrix, signed det of the 6x6 bracket matrix)."""
    if len(fs) != 6 or any(f.weight != 1 for f in fs) or g.weight != 3:
        raise ValueError("expects six weight-1 forms and one weight-3 form")
    forms = [*fs, g]
    f1 = fs[0](Z)
    if abs(f1) < 1e-6:
        raise DegenerateError("first form is too close to zero")
    top = np.array([f.weight * f(Z) for f in forms])
    grads = np.column_stack([np.ravel(f.gradient(Z)) for f in forms])
    big = np.vstack([top, grads])
    small = np.column_stack([np.ravel(bracket(fs[0], f, Z)) for f in forms[1:]])
    return f1**5 * complex(np.linalg.det(big)), REDUCTION_SIGN * complex(np.linalg.det(small))


def reduction_identity_residual(fs: list[WeightedForm], g: WeightedForm, Z) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|); 0 when both sides vanish exactly."""
    lhs, rhs = reduction_identity_sides(fs, g, Z)
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale
