"""Theta constants on the hermitian half-plane of degree 2.

Eisenstein case (lattice Z[omega]^2, characteristic p with sqrt(-3) p integral)::

    Theta_p(Z) = sum_{h in p + o^2} exp(2 pi i h^* Z h)

Gauss case (lattice Z[i]^2, a = (1+i) alpha, b = (1+i) beta)::

    Theta[m](Z) = sum_{h in a/2 + o^2} exp(pi i (h^* Z h + Re(b^* h)))

The lattice o^2 is treated as Z^4 through the basis (1, eta) in each
component.  Truncation is to an ellipsoid ``q(v) <= T`` of the real quadratic
form ``q = Im(h^* Z h) = h^* Y h``; ``T`` is chosen so that a rigorous Gaussian
tail estimate stays below the requested bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .halfplane import imag_part_hermitian, membership_hermitian

EISENSTEIN = "eisenstein"
GAUSS = "gauss"
_OMEGA = complex(-0.5, math.sqrt(3) / 2)
# 1/sqrt(-3) = -1/3 - (2/3) omega
_INV_SQRT_M3 = (-1 / 3, -2 / 3)


class TruncationError(ValueError):
    """The point is too close to the boundary for a certified evaluation."""


@dataclass(frozen=True)
class TruncationPolicy:
    tail_bound: float = 1e-12
    max_radius: float = 14.0
    min_margin: float = 0.4

    def __post_init__(self):
        if not self.tail_bound > 0:
            raise ValueError("tail bound must be positive")
        if self.max_radius < 1:
            raise ValueError("radius must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ThetaCharacteristic:
    """``case == "eisenstein"``: ``data`` is sqrt(-3) p (two integers).
    ``case == "gauss"``: ``data`` is (alpha1, alpha2, beta1, beta2)."""

    case: str
    data: tuple[int, ...]

    def __post_init__(self):
        if self.case == EISENSTEIN:
            if len(self.data) != 2:
                raise ValueError("Eisenstein characteristics are pairs")
        elif self.case == GAUSS:
            if len(self.data) != 4 or any(x not in (0, 1) for x in self.data):
                raise ValueError("Gauss characteristics are (alpha, beta) in {0,1}^4")
            a1, a2, b1, b2 = self.data
            if (a1 * b1 + a2 * b2) % 2:
                raise ValueError(f"odd characteristic {self.data}")
        else:
            raise ValueError(f"unknown case {self.case!r}")

    @property
    def alpha(self):
        return self.data[:2]

    @property
    def beta(self):
        return self.data[2:]

    @property
    def label(self) -> str:
        if self.case == EISENSTEIN:
            return "p={}/sqrt(-3)".format(self.data)
        return "alpha={},beta={}".format(self.alpha, self.beta)

    @property
    def exponent_scale(self) -> float:
        return 2 * math.pi if self.case == EISENSTEIN else math.pi

    def shift(self) -> np.ndarray:
        """Real lattice coordinates of the characteristic shift."""
        if self.case == EISENSTEIN:
            q1, q2 = self.data
            x, y = _INV_SQRT_M3
            return np.array([q1 * x, q1 * y, q2 * x, q2 * y])
        a1, a2 = self.alpha
        return np.array([a1, a1, a2, a2]) / 2

    def linear_term(self) -> np.ndarray | None:
        """b for the Gauss phase Re(b^* h), else None."""
        if self.case == EISENSTEIN:
            return None
        b1, b2 = self.beta
        return (1 + 1j) * np.array([b1, b2])


_EIS_COLUMNS = ((0, 0), (1, 0), (0, 1), (1, 1), (1, -1))
_GAUSS_GENERATORS = (
    (1, 1, 0, 0),
    (0, 0, 1, 1),
    (1, 0, 0, 0),
    (0, 0, 0, 0),
    (1, 1, 1, 1),
)


def _gauss_all():
    rest = []
    for bits in np.ndindex(2, 2, 2, 2):
        a1, a2, b1, b2 = bits
        if (a1 * b1 + a2 * b2) % 2 == 0 and bits not in _GAUSS_GENERATORS:
            rest.append(tuple(int(x) for x in bits))
    return list(_GAUSS_GENERATORS) + rest


def characteristic_table(case: str) -> list[ThetaCharacteristic]:
    """Eisenstein: the five Theta_1..Theta_5.  Gauss: all ten even characteristics,
    the five generators Theta(1)..Theta(5) first."""
    if case == EISENSTEIN:
        return [ThetaCharacteristic(EISENSTEIN, c) for c in _EIS_COLUMNS]
    if case == GAUSS:
        return [ThetaCharacteristic(GAUSS, c) for c in _gauss_all()]
    raise ValueError(f"unknown case {case!r}")


def gauss_generators() -> list[ThetaCharacteristic]:
    return characteristic_table(GAUSS)[:5]


# --- lattice geometry -----------------------------------------------------------


def _basis(case: str) -> np.ndarray:
    """2x4 complex matrix B with h = B v for real coordinates v."""
    eta = _OMEGA if case == EISENSTEIN else 1j
    return np.array([[1, eta, 0, 0], [0, 0, 1, eta]], dtype=complex)


def _gram(case: str, Z: np.ndarray) -> np.ndarray:
    B = _basis(case)
    Y = imag_part_hermitian(Z)
    G = (B.conj().T @ Y @ B).real
    return (G + G.T) / 2


def _tail(kappa: float, lam: float, mu: float, T: float) -> float:
    """Bound for the value and gradient tails outside q <= T.

    For q > T: e^{-kappa q} <= e^{-kappa T/2} e^{-kappa q/2}, and the full sum of
    e^{-kappa q/2} over a shifted Z^4 is at most (1 + sqrt(2 pi/(kappa lam)))^4.
    Gradient prefactors are bounded by kappa |h|^2 <= kappa q / mu, and
    q e^{-kappa q/2} is decreasing for q >= 2/kappa.
    """
    S = (1 + math.sqrt(2 * math.pi / (kappa * lam))) ** 4
    return math.exp(-kappa * T / 2) * S * max(1.0, kappa * T / mu)


def truncation_level(case: str, Z: np.ndarray, policy: TruncationPolicy = DEFAULT_POLICY):
    """(T, tail bound, Gram matrix) for a certified evaluation at Z."""
    ok, margin = membership_hermitian(Z)
    if not ok:
        raise TruncationError("point is not in the half-plane")
    if margin < policy.min_margin:
        raise TruncationError(f"margin {margin:.3g} below policy minimum {policy.min_margin}")
    kappa = 2 * math.pi if case == EISENSTEIN else math.pi
    G = _gram(case, Z)
    lam = float(np.linalg.eigvalsh(G)[0])
    mu = margin / 2  # smallest eigenvalue of Y
    T = 2 / kappa
    while _tail(kappa, lam, mu, T) > policy.tail_bound:
        T *= 1.05
    if math.sqrt(T / lam) > policy.max_radius:
        raise TruncationError(f"required lattice radius {math.sqrt(T / lam):.1f} exceeds {policy.max_radius}")
    return T, _tail(kappa, lam, mu, T), G


def _box(center_shift: np.ndarray, half_widths: np.ndarray) -> np.ndarray:
    """All integer v with |v_i + s_i| <= w_i, as an (N, 4) array of v + s."""
    axes = []
    for s, w in zip(center_shift, half_widths):
        lo, hi = math.ceil(-s - w), math.floor(-s + w)
        axes.append(np.arange(lo, hi + 1) + s)
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=-1)


def _sum_terms(ch: ThetaCharacteristic, Z: np.ndarray, pts: np.ndarray):
    B = _basis(ch.case)
    h = pts @ B.T  # (N, 2)
    Qz = np.einsum("nj,jk,nk->n", h.conj(), Z, h)
    expo = 1j * ch.exponent_scale * Qz
    b = ch.linear_term()
    if b is not None:
        expo = expo + 1j * math.pi * (h @ b.conj()).real
    terms = np.exp(expo)
    value = terms.sum()
    grad = 1j * ch.exponent_scale * np.einsum("n,nj,nk->jk", terms, h.conj(), h)
    return value, grad


@lru_cache(maxsize=4096)
def _theta_cached(ch: ThetaCharacteristic, zkey: bytes, policy: TruncationPolicy):
    Z = np.frombuffer(zkey, dtype=complex).reshape(2, 2)
    T, bound, G = truncation_level(ch.case, Z, policy)
    widths = np.sqrt(T * np.diag(np.linalg.inv(G)))
    pts = _box(ch.shift(), widths)
    q = np.einsum("ni,ij,nj->n", pts, G, pts)
    pts = pts[q <= T]
    value, grad = _sum_terms(ch, Z, pts)
    return value, grad, bound, math.sqrt(T / float(np.linalg.eigvalsh(G)[0]))


def theta_with_gradient(ch: ThetaCharacteristic, Z, policy: TruncationPolicy = DEFAULT_POLICY):
    """(value, gradient, tail bound, lattice radius).

    ``gradient[j, k]`` is the derivative with respect to z_{jk}.
    """
    Z = np.ascontiguousarray(np.asarray(Z, dtype=complex))
    value, grad, bound, radius = _theta_cached(ch, Z.tobytes(), policy)
    return value, grad.copy(), bound, radius


def theta_eval(ch: ThetaCharacteristic, Z, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    return complex(theta_with_gradient(ch, Z, policy)[0])


def theta_gradient(ch: ThetaCharacteristic, Z, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    return theta_with_gradient(ch, Z, policy)[1]


def theta_bruteforce(ch: ThetaCharacteristic, Z, radius: int):
    """Plain sum over the full integer box |v_i| <= radius (no ellipsoid, no tail logic)."""
    Z = np.asarray(Z, dtype=complex)
    r = np.arange(-radius, radius + 1)
    grid = np.stack([g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij")], axis=-1)
    return _sum_terms(ch, Z, grid + ch.shift())


def phi10(Z, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Product of the ten Gauss theta series."""
    out = 1.0 + 0j
    for ch in characteristic_table(GAUSS):
        out *= theta_eval(ch, Z, policy)
    return out
