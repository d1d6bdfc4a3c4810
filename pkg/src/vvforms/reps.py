"""Automorphy factors and the representations they use.

Hermitian case: St (x) St acting on 2x2 matrices by W -> A W B^T.

Quaternionic case: the 6-dimensional representation of GL(4, C) on the
complexified hermitian slice (see :mod:`vvforms.halfplane`),
``A -> (W -> A W A*)`` with ``A* = Jt A^T Jt^{-1}`` and ``Jt = diag(J2, J2)``.
For ``A`` the check image of a quaternion matrix ``U``, ``A*`` is the check
image of the conjugate transpose of ``U``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .halfplane import (
    PACK_BASIS,
    HalfPlaneError,
    RCOND_MIN,
    cz_plus_d,
    quat_pack,
    quat_unpack,
    slice_residual,
)

CHARACTER_MODES = ("det^r", "det^r/2", "trivial")
REPRESENTATIONS = ("trivial", "st-st", "rho-jac")

_J2 = np.array([[0, -1], [1, 0]], dtype=complex)
J_TILDE = np.kron(np.eye(2), _J2)
_J_TILDE_INV = np.linalg.inv(J_TILDE)


@dataclass(frozen=True)
class AutomorphyFactorSpec:
    """chi(M) det(CZ+D)^r rho(...).  ``character`` selects chi among powers of det M."""

    weight: int
    character: str = "det^r"
    representation: str = "trivial"

    def __post_init__(self):
        if self.character not in CHARACTER_MODES:
            raise ValueError(f"unknown character mode {self.character!r}")
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.character == "det^r/2" and self.weight % 2:
            raise ValueError("det^(r/2) needs an even weight")

    def character_value(self, det_m: complex) -> complex:
        if self.character == "det^r":
            return det_m**self.weight
        if self.character == "det^r/2":
            return det_m ** (self.weight // 2)
        return 1.0 + 0j

    def scalar_factor(self, det_m: complex, det_czd: complex) -> complex:
        return self.character_value(det_m) * det_czd**self.weight


def apply_st_tensor_st(A, B, W) -> np.ndarray:
    return np.asarray(A) @ np.asarray(W) @ np.asarray(B).T


def star(A) -> np.ndarray:
    """Holomorphic extension of quaternionic conjugate transpose to 4x4 complex matrices."""
    return J_TILDE @ np.asarray(A, dtype=complex).T @ _J_TILDE_INV


class RepresentationError(RuntimeError):
    """Internal consistency failure: an image left the hermitian slice."""


def rho_jac(A) -> np.ndarray:
    """6x6 matrix of W -> A W A* in the slice basis (z0, z2, z10, z11, z12, z13)."""
    A = np.asarray(A, dtype=complex)
    As = star(A)
    out = np.empty((6, 6), dtype=complex)
    for k in range(6):
        img = A @ PACK_BASIS[k] @ As
        res = slice_residual(img)
        if res > 1e-10:
            raise RepresentationError(f"basis image {k} off the slice ({res:.1e})")
        out[:, k] = quat_unpack(img, tol=np.inf)
    return out


def _inv_checked(P: np.ndarray) -> np.ndarray:
    rcond = 1.0 / np.linalg.cond(P)
    if not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise HalfPlaneError(f"CZ+D is singular (rcond {rcond:.1e})")
    return np.linalg.inv(P)


@dataclass(frozen=True)
class HermitianJacobian:
    """dZ -> P dZ Q with P = (conj(C) Z^T + conj(D))^T^{-1}, Q = (CZ+D)^{-1}."""

    P: np.ndarray
    Q: np.ndarray

    def __call__(self, W) -> np.ndarray:
        return self.P @ np.asarray(W) @ self.Q

    @property
    def matrix(self) -> np.ndarray:
        """Acts on row-major (z11, z12, z21, z22)."""
        return np.kron(self.P, self.Q.T)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


def _complex(M) -> np.ndarray:
    return np.asarray(getattr(M, "complex_image", M), dtype=complex)


def jac_hermitian(M, Z) -> HermitianJacobian:
    Mc = _complex(M)
    Z = np.asarray(Z, dtype=complex)
    C, D = Mc[2:, :2], Mc[2:, 2:]
    left = C.conj() @ Z.T + D.conj()
    return HermitianJacobian(P=_inv_checked(left.T), Q=_inv_checked(C @ Z + D))


def jac_quaternionic(M, Z) -> np.ndarray:
    """Jacobian of the coordinate map Z -> MZ on the quaternionic half-plane.

    Equal to ``rho_jac(P*)^{-1}`` with ``P`` the check image of CZ+D; its
    determinant is ``det(P)^{-3}``.
    """
    Mc = _complex(M)
    if Mc.shape != (8, 8):
        raise ValueError("quaternionic Jacobian needs the 8x8 check image")
    P = cz_plus_d(Mc, quat_pack(Z))
    _inv_checked(P)
    return np.linalg.inv(rho_jac(star(P)))
