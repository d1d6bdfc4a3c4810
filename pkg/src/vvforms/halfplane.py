"""The hermitian half-plane of degree 2 and the quaternionic half-plane of degree 2.

Hermitian points are plain complex 2x2 arrays (not assumed symmetric).
Quaternionic points are complex 6-vectors of coordinates
``(z0, z2, z10, z11, z12, z13)`` for

    Z = [[z0, z1], [z1*, z2]],   z1 = z10 + i1 z11 + i2 z12 + i3 z13,

where ``*`` is quaternion conjugation extended C-linearly.  For Moebius
transformations a quaternionic point is packed into the 4x4 complex matrix
obtained by applying the check embedding entrywise.
"""
from __future__ import annotations

import numpy as np

from .arith import Quaternion, check_embed_coeffs

QUAT_COORDS = ("z0", "z2", "z10", "z11", "z12", "z13")
HERM_COORDS = ("z11", "z12", "z21", "z22")

#: Reciprocal condition number below which CZ+D counts as singular.
RCOND_MIN = 1e-12


class HalfPlaneError(ValueError):
    """Raised for points outside the half-plane or singular CZ+D."""


class SliceError(ValueError):
    """A 4x4 matrix does not lie in the complexified hermitian slice."""


# --- hermitian ------------------------------------------------------------


def imag_part_hermitian(Z: np.ndarray) -> np.ndarray:
    """Y = (Z - Z^*)/(2i), so that i(Z^* - Z) = 2Y."""
    Z = np.asarray(Z, dtype=complex)
    return (Z - Z.conj().T) / 2j


def membership_hermitian(Z) -> tuple[bool, float]:
    """Test i(Z^* - Z) > 0; the margin is its smallest eigenvalue."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (2, 2):
        raise ValueError("hermitian points are 2x2")
    T = 1j * (Z.conj().T - Z)
    T = (T + T.conj().T) / 2
    a = T[0, 0].real
    det = (T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]).real
    margin = float(np.linalg.eigvalsh(T)[0])
    return bool(a > 0 and det > 0), margin


def transpose_hermitian(Z) -> np.ndarray:
    return np.asarray(Z, dtype=complex).T.copy()


def flatten_hermitian(Z) -> np.ndarray:
    """Row-major order (z11, z12, z21, z22)."""
    return np.asarray(Z, dtype=complex).reshape(4)


def unflatten_hermitian(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(2, 2)


# --- quaternionic ---------------------------------------------------------


def _pack_basis() -> np.ndarray:
    basis = np.zeros((6, 4, 4), dtype=complex)
    for k in range(6):
        e = np.zeros(6, dtype=complex)
        e[k] = 1
        basis[k] = _pack(e)
    return basis


def _pack(coords) -> np.ndarray:
    c = np.asarray(coords, dtype=complex)
    z0, z2, z1 = c[0], c[1], c[2:6]
    z1bar = z1 * np.array([1, -1, -1, -1])
    W = np.zeros((4, 4), dtype=complex)
    W[0:2, 0:2] = z0 * np.eye(2)
    W[2:4, 2:4] = z2 * np.eye(2)
    W[0:2, 2:4] = check_embed_coeffs(z1)
    W[2:4, 0:2] = check_embed_coeffs(z1bar)
    return W


PACK_BASIS = _pack_basis()
# C-linear map coords -> row-major vec(W)
_PACK_MATRIX = PACK_BASIS.reshape(6, 16).T
_UNPACK_MATRIX = np.linalg.pinv(_PACK_MATRIX)


def quat_pack(coords) -> np.ndarray:
    """4x4 complex matrix of a quaternionic point (or any element of the slice)."""
    return (_PACK_MATRIX @ np.asarray(coords, dtype=complex)).reshape(4, 4)


def slice_residual(W) -> float:
    """Distance of W from the complexified hermitian slice, relative to |W|."""
    W = np.asarray(W, dtype=complex)
    w = W.reshape(16)
    back = _PACK_MATRIX @ (_UNPACK_MATRIX @ w)
    return float(np.linalg.norm(w - back) / max(1.0, np.linalg.norm(w)))


def quat_unpack(W, tol: float = 1e-10) -> np.ndarray:
    """Inverse of :func:`quat_pack`; rejects matrices outside the slice."""
    W = np.asarray(W, dtype=complex)
    res = slice_residual(W)
    if res > tol:
        raise SliceError(f"matrix is off the hermitian slice (residual {res:.2e})")
    return _UNPACK_MATRIX @ W.reshape(16)


def imag_part_quaternionic(coords) -> np.ndarray:
    """Check image of the imaginary part Y, a hermitian 4x4 matrix."""
    W = quat_pack(coords)
    return (W - W.conj().T) / 2j


def quat_membership(coords) -> tuple[bool, float]:
    """y0 > 0 and y0*y2 > N(y1); margin is the smallest eigenvalue of Y."""
    c = np.asarray(coords, dtype=complex)
    y = c.imag
    y0, y2, y1 = y[0], y[1], y[2:6]
    ok = y0 > 0 and y0 * y2 - float(np.dot(y1, y1)) > 0
    Y = imag_part_quaternionic(c)
    margin = float(np.linalg.eigvalsh((Y + Y.conj().T) / 2)[0])
    return bool(ok), margin


def quat_transpose(coords) -> np.ndarray:
    """tau(Z) = Z': conjugates the off-diagonal quaternion."""
    c = np.asarray(coords, dtype=complex).copy()
    c[3:6] *= -1
    return c


def quat_transpose_via_matrix(coords) -> np.ndarray:
    """Independent route for tau: swap the off-diagonal quaternion blocks of the packed matrix."""
    W = quat_pack(coords)
    T = W.copy()
    T[0:2, 2:4], T[2:4, 0:2] = W[2:4, 0:2], W[0:2, 2:4]
    return quat_unpack(T)


def quat_from_blocks(z0, z2, z1) -> np.ndarray:
    return np.array([z0, z2, *z1], dtype=complex)


def quat_z1(coords) -> np.ndarray:
    return np.asarray(coords, dtype=complex)[2:6]


# --- Moebius action ---------------------------------------------------------


def _solve_right(N: np.ndarray, P: np.ndarray) -> np.ndarray:
    """N @ inv(P), refusing ill-conditioned P."""
    rcond = 1.0 / np.linalg.cond(P)
    if not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise HalfPlaneError(f"CZ+D is singular (rcond {rcond:.1e})")
    return np.linalg.solve(P.T, N.T).T


def moebius_matrix(M: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """(AZ+B)(CZ+D)^{-1} for a square complex block matrix M."""
    n = Z.shape[0]
    A, B, C, D = M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]
    return _solve_right(A @ Z + B, C @ Z + D)


def cz_plus_d(M: np.ndarray, Z: np.ndarray) -> np.ndarray:
    n = Z.shape[0]
    return M[n:, :n] @ Z + M[n:, n:]


def moebius(M, Z, check: bool = True):
    """Apply a group element (or its complex image) to a point.

    ``Z`` is a 2x2 array (hermitian) or a 6-vector (quaternionic).  With
    ``check`` the image is tested for half-plane membership.
    """
    Mc = getattr(M, "complex_image", M)
    Mc = np.asarray(Mc, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    if Z.shape == (2, 2):
        if Mc.shape != (4, 4):
            raise ValueError("hermitian action needs a 4x4 matrix")
        W = moebius_matrix(Mc, Z)
        if check and not membership_hermitian(W)[0]:
            raise HalfPlaneError("image left the half-plane; invalid group element?")
        return W
    if Z.shape == (6,):
        if Mc.shape != (8, 8):
            raise ValueError("quaternionic action needs the 8x8 check image")
        W = quat_unpack(moebius_matrix(Mc, quat_pack(Z)), tol=1e-8)
        if check and not quat_membership(W)[0]:
            raise HalfPlaneError("image left the half-plane; invalid group element?")
        return W
    raise ValueError(f"unrecognised point shape {Z.shape}")


# --- involutions --------------------------------------------------------------


def involution_action(op, Z):
    """Apply tau (``op == "tau"``) or a SignedPermutation to a point."""
    Z = np.asarray(Z, dtype=complex)
    if isinstance(op, str):
        if op != "tau":
            raise ValueError(f"unknown involution {op!r}")
        return transpose_hermitian(Z) if Z.shape == (2, 2) else quat_transpose(Z)
    if Z.shape != (6,):
        raise ValueError("signed permutations act on quaternionic points only")
    out = Z.copy()
    out[2:6] = op.apply(Z[2:6])
    return out


# --- sampling -----------------------------------------------------------------


def random_hermitian_point(rng: np.random.Generator, margin: float = 0.4, spread: float = 1.0) -> np.ndarray:
    """Z = X + iY with X entries in [-1, 1] and i(Z^* - Z) = 2Y >= margin."""
    x11, x22 = rng.uniform(-1, 1, 2)
    x12 = complex(*rng.uniform(-1, 1, 2))
    X = np.array([[x11, x12], [np.conj(x12), x22]])
    B = rng.normal(scale=spread / 2, size=(2, 2)) + 1j * rng.normal(scale=spread / 2, size=(2, 2))
    Y = B @ B.conj().T + (margin / 2) * np.eye(2)
    return X + 1j * Y


def random_quaternionic_point(rng: np.random.Generator, margin: float = 0.4, spread: float = 1.0) -> np.ndarray:
    """Coordinates with real parts in [-1, 1] and Y >= margin (smallest eigenvalue)."""
    x = rng.uniform(-1, 1, 6)
    G = rng.normal(scale=spread / 2, size=(2, 4))
    # Y = G G^* over H: y0 = |g0|^2, y2 = |g1|^2, y1 = g0 * conj(g1)
    q0, q1 = Quaternion(*G[0]), Quaternion(*G[1])
    y1 = q0 * q1.conj()
    y = np.array([float(q0.norm()) + margin, float(q1.norm()) + margin, *(float(c) for c in y1.coeffs)])
    return x + 1j * y


def random_point_on_locus(rng: np.random.Generator, factor: complex, swap: bool = False, margin: float = 0.4) -> np.ndarray:
    """Hermitian point with z12 = factor * z21 (or z21 = factor * z12 when ``swap``)."""
    while True:
        z11 = complex(rng.uniform(-1, 1), rng.uniform(margin, 2.0))
        z22 = complex(rng.uniform(-1, 1), rng.uniform(margin, 2.0))
        w = complex(*rng.normal(scale=0.4, size=2))
        Z = np.array([[z11, factor * w], [w, z22]]) if not swap else np.array([[z11, w], [factor * w, z22]])
        ok, m = membership_hermitian(Z)
        if ok and m >= margin:
            return Z
