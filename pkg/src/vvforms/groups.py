"""Exact elements of U(2,2) over Z[omega], Z[i] and of Sp(2, H) over the Hurwitz order.

Matrices are 4x4 numpy object arrays of :class:`ImagQuadInt` or
:class:`Quaternion` entries.  The symplectic relation ``M^* J M = J`` is always
checked exactly; floating point only enters through the cached complex image.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith import (
    EISENSTEIN,
    GAUSS,
    HURWITZ_OMEGA,
    I1,
    ImagQuadInt,
    Quaternion,
    check_embed,
    hurwitz_units,
    in_p,
    is_hurwitz,
    quad_residue,
    units,
)

UNITARY_EISENSTEIN = "unitary-eisenstein"
UNITARY_GAUSS = "unitary-gauss"
QUATERNIONIC = "quaternionic"
KINDS = (UNITARY_EISENSTEIN, UNITARY_GAUSS, QUATERNIONIC)

LEVEL_OF_KIND = {UNITARY_EISENSTEIN: "sqrt-3", UNITARY_GAUSS: "1+i", QUATERNIONIC: "p"}
_RING_OF_KIND = {UNITARY_EISENSTEIN: EISENSTEIN, UNITARY_GAUSS: GAUSS}


class InvalidElementError(ValueError):
    """The candidate matrix violates the defining relation of its group."""


# --- entry helpers ------------------------------------------------------------


def _zero(kind):
    if kind == QUATERNIONIC:
        return Quaternion(0)
    return ImagQuadInt(0, 0, _RING_OF_KIND[kind])


def _one(kind):
    if kind == QUATERNIONIC:
        return Quaternion(1)
    return ImagQuadInt(1, 0, _RING_OF_KIND[kind])


def _entry(kind, x):
    if isinstance(x, (ImagQuadInt, Quaternion)):
        return x
    if kind == QUATERNIONIC:
        return Quaternion(x)
    return ImagQuadInt(int(x), 0, _RING_OF_KIND[kind])


def _conj_array(M: np.ndarray) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(M.shape):
        out[idx] = M[idx].conj()
    return out


def conj_transpose(M: np.ndarray) -> np.ndarray:
    return _conj_array(M).T


def matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n, m = X.shape[0], Y.shape[1]
    out = np.empty((n, m), dtype=object)
    for j in range(n):
        for k in range(m):
            acc = X[j, 0] * Y[0, k]
            for l in range(1, X.shape[1]):
                acc = acc + X[j, l] * Y[l, k]
            out[j, k] = acc
    return out


def identity(kind, n: int = 4) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for j in range(n):
        for k in range(n):
            out[j, k] = _one(kind) if j == k else _zero(kind)
    return out


def as_matrix(kind, rows) -> np.ndarray:
    rows = list(rows)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for j, row in enumerate(rows):
        for k, x in enumerate(row):
            out[j, k] = _entry(kind, x)
    return out


def j_matrix(kind) -> np.ndarray:
    z, o = _zero(kind), _one(kind)
    return as_matrix(kind, [[z, z, -o, z], [z, z, z, -o], [o, z, z, z], [z, o, z, z]])


def _is_zero(x) -> bool:
    return x.is_zero()


def _equal(X: np.ndarray, Y: np.ndarray) -> bool:
    return all(_is_zero(X[idx] - Y[idx]) for idx in np.ndindex(X.shape))


# --- group elements -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    kind: str
    entries: np.ndarray = field(repr=False)

    @cached_property
    def complex_image(self) -> np.ndarray:
        if self.kind == QUATERNIONIC:
            return check_embed(self.entries)
        return np.array([[complex(x) for x in row] for row in self.entries])

    @property
    def blocks(self):
        E = self.entries
        return E[:2, :2], E[:2, 2:], E[2:, :2], E[2:, 2:]

    @cached_property
    def det(self) -> complex:
        return complex(np.linalg.det(self.complex_image))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if other.kind != self.kind:
            raise TypeError("cannot multiply elements of different groups")
        return GroupElement(self.kind, matmul(self.entries, other.entries))

    def inverse(self) -> "GroupElement":
        # M^{-1} = J^{-1} M^* J and J^{-1} = -J
        J = j_matrix(self.kind)
        inv = matmul(matmul(J, conj_transpose(self.entries)), J)
        return GroupElement(self.kind, _neg(inv))

    def __eq__(self, other):
        if not isinstance(other, GroupElement) or other.kind != self.kind:
            return NotImplemented
        return _equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.kind, tuple(repr(x) for x in self.entries.flat)))

    def is_identity(self) -> bool:
        return _equal(self.entries, identity(self.kind))

    def to_json(self) -> dict:
        if self.kind == QUATERNIONIC:
            cells = [[[str(Fraction(c)) for c in x.coeffs] for x in row] for row in self.entries]
        else:
            cells = [[[x.a, x.b] for x in row] for row in self.entries]
        return {"kind": self.kind, "entries": cells}

    @classmethod
    def from_json(cls, data: dict) -> "GroupElement":
        kind = data["kind"]
        if kind == QUATERNIONIC:
            rows = [[Quaternion(*(Fraction(c) for c in cell)) for cell in row] for row in data["entries"]]
        else:
            rows = [[ImagQuadInt(cell[0], cell[1], _RING_OF_KIND[kind]) for cell in row] for row in data["entries"]]
        return validate_element(as_matrix(kind, rows), kind)


def _neg(M: np.ndarray) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(M.shape):
        out[idx] = -M[idx]
    return out


def _check_ring(M: np.ndarray, kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    for x in M.flat:
        if kind == QUATERNIONIC:
            if not isinstance(x, Quaternion):
                raise TypeError(f"entry {x!r} is not a quaternion")
            if not is_hurwitz(x):
                raise InvalidElementError(f"entry {x!r} is not a Hurwitz integer")
        elif not isinstance(x, ImagQuadInt) or x.ring != _RING_OF_KIND[kind]:
            raise TypeError(f"entry {x!r} is not in the {_RING_OF_KIND[kind]} ring")


def validate_element(M, kind: str) -> GroupElement:
    """Check ``M^* J M = J`` exactly and return the validated element."""
    M = np.asarray(M, dtype=object)
    if M.shape != (4, 4):
        raise ValueError("group elements are 4x4")
    _check_ring(M, kind)
    J = j_matrix(kind)
    if not _equal(matmul(matmul(conj_transpose(M), J), M), J):
        raise InvalidElementError("M^* J M != J")
    return GroupElement(kind, M)


# --- generators -------------------------------------------------------------------


def translation(kind, H) -> GroupElement:
    """[[E, H], [0, E]]; H must be hermitian."""
    H = as_matrix(kind, H)
    E, Z = identity(kind, 2), as_matrix(kind, [[0, 0], [0, 0]])
    return validate_element(np.block([[E, H], [Z, E]]), kind)


def lower_translation(kind, H) -> GroupElement:
    H = as_matrix(kind, H)
    E, Z = identity(kind, 2), as_matrix(kind, [[0, 0], [0, 0]])
    return validate_element(np.block([[E, Z], [H, E]]), kind)


def block_diagonal(kind, U, U_inv) -> GroupElement:
    """diag(U, (U^*)^{-1}) given U and its inverse."""
    U, U_inv = as_matrix(kind, U), as_matrix(kind, U_inv)
    Z = as_matrix(kind, [[0, 0], [0, 0]])
    return validate_element(np.block([[U, Z], [Z, conj_transpose(U_inv)]]), kind)


def j_element(kind) -> GroupElement:
    return validate_element(j_matrix(kind), kind)


def identity_element(kind) -> GroupElement:
    return GroupElement(kind, identity(kind))


def scalar_element(kind, u) -> GroupElement:
    """u * E_4 for a unit u (central in the unitary case, not in general)."""
    u = _entry(kind, u)
    z = _zero(kind)
    return validate_element(as_matrix(kind, [[u if j == k else z for k in range(4)] for j in range(4)]), kind)


def _ring_elements(kind, max_norm: int):
    """All ring elements with norm <= max_norm (integers only on the real axis)."""
    if kind == QUATERNIONIC:
        # doubled coordinates, all of one parity
        r = 2 * int(max_norm**0.5) + 1
        out = []
        for c in itertools.product(range(-r, r + 1), repeat=4):
            if len({x % 2 for x in c}) == 1:
                q = Quaternion(*(Fraction(x, 2) for x in c))
                if q.norm() <= max_norm:
                    out.append(q)
        return out
    ring = _RING_OF_KIND[kind]
    r = int(2 * max_norm**0.5) + 1
    out = [ImagQuadInt(a, b, ring) for a in range(-r, r + 1) for b in range(-r, r + 1)]
    return [x for x in out if x.norm() <= max_norm]


def _real_integers(kind, bound: int, multiple: int = 1):
    return [_entry(kind, multiple * k) for k in range(-bound, bound + 1)]


def _units(kind):
    return hurwitz_units() if kind == QUATERNIONIC else units(_RING_OF_KIND[kind])


def _random_hermitian(kind, rng, diag_choices, off_choices):
    h1 = diag_choices[rng.integers(len(diag_choices))]
    h2 = diag_choices[rng.integers(len(diag_choices))]
    h12 = off_choices[rng.integers(len(off_choices))]
    return [[h1, h12], [h12.conj(), h2]]


def _random_gl2(kind, rng, lam_choices, unit_choices):
    """(U, U^{-1}) for an elementary matrix or a diagonal unit matrix."""
    z, o = _zero(kind), _one(kind)
    if rng.random() < 0.7:
        lam = lam_choices[rng.integers(len(lam_choices))]
        if rng.random() < 0.5:
            return [[o, lam], [z, o]], [[o, -lam], [z, o]]
        return [[o, z], [lam, o]], [[o, z], [-lam, o]]
    u1 = unit_choices[rng.integers(len(unit_choices))]
    u2 = unit_choices[rng.integers(len(unit_choices))]
    return [[u1, z], [z, u2]], [[u1.conj(), z], [z, u2.conj()]]


def random_generator(kind, rng: np.random.Generator) -> GroupElement:
    choice = rng.integers(3)
    if choice == 0:
        H = _random_hermitian(kind, rng, _real_integers(kind, 2), _ring_elements(kind, 4))
        return translation(kind, H)
    if choice == 1:
        U, U_inv = _random_gl2(kind, rng, [x for x in _ring_elements(kind, 3) if not x.is_zero()], _units(kind))
        return block_diagonal(kind, U, U_inv)
    return j_element(kind)


def random_word(kind: str, length: int, seed) -> GroupElement:
    """Product of ``length`` random standard generators (translations, diag(U, U^{*-1}), J)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    M = identity_element(kind)
    for _ in range(length):
        M = M @ random_generator(kind, rng)
    return validate_element(M.entries, kind)


# --- congruence subgroups ------------------------------------------------------------


def _entry_in_level(x, level: str) -> bool:
    if level == "p":
        return in_p(x)
    return quad_residue(x, level) == 0


def congruence_member(M: GroupElement, level: str) -> bool:
    """M = E modulo the level (for the quaternionic kind, M = +-E modulo p)."""
    if LEVEL_OF_KIND.get(M.kind) != level:
        raise ValueError(f"level {level!r} does not match kind {M.kind!r}")
    E = identity(M.kind)
    diffs = [M.entries - E]
    if M.kind == QUATERNIONIC:
        diffs.append(M.entries + E)
    return any(all(_entry_in_level(x, level) for x in D.flat) for D in diffs)


def _level_generator(kind):
    if kind == QUATERNIONIC:
        return Quaternion(1, 1)
    if kind == UNITARY_EISENSTEIN:
        return ImagQuadInt(1, 2, EISENSTEIN)
    return ImagQuadInt(1, 1, GAUSS)


def _congruence_generator(kind, rng) -> GroupElement:
    lam = _level_generator(kind)
    # rational integers lying in the level ideal: multiples of 3 resp. 2
    mult = 3 if kind == UNITARY_EISENSTEIN else 2
    small = [x for x in _ring_elements(kind, 2)]
    choice = rng.integers(3)
    if choice < 2:
        H = _random_hermitian(kind, rng, _real_integers(kind, 1, mult), [lam * c for c in small])
        return translation(kind, H) if choice == 0 else lower_translation(kind, H)
    level = LEVEL_OF_KIND[kind]
    good_units = [u for u in _units(kind) if _entry_in_level(u - _one(kind), level)]
    lam_choices = [lam * c for c in small if not c.is_zero()]
    U, U_inv = _random_gl2(kind, rng, lam_choices, good_units)
    return block_diagonal(kind, U, U_inv)


def congruence_sample(level: str, seed, n_factors: int = 2, conj_length: int = 1) -> GroupElement:
    """A non-identity element of the principal congruence subgroup of the given level.

    Built from level-divisible translations, diag(U, U^{*-1}) with U = E mod
    level, and conjugates of these by random words of the full group.
    """
    kind = {v: k for k, v in LEVEL_OF_KIND.items()}[level]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        M = identity_element(kind)
        for _ in range(max(1, n_factors)):
            T = _congruence_generator(kind, rng)
            W = random_word(kind, int(rng.integers(conj_length + 1)), rng)
            M = M @ (W @ T @ W.inverse())
        if not M.is_identity():
            assert congruence_member(M, level)
            return M


# --- O'(4, Z) and the index-6 quotient ---------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """x -> (s_1 x_{perm(1)}, ..., s_4 x_{perm(4)}) with an even number of minus signs."""

    perm: tuple[int, int, int, int]
    signs: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2, 3]:
            raise ValueError(f"{self.perm} is not a permutation of 0..3")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        if int(np.prod(self.signs)) != 1:
            raise InvalidElementError("odd number of minus signs: not in O'(4, Z)")

    def apply(self, x):
        vals = [s * x[p] for s, p in zip(self.signs, self.perm)]
        return np.array(vals) if isinstance(x, np.ndarray) else vals

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self after other."""
        # (self o other)(x)_k = s_k * other(x)_{p_k} = s_k * t_{p_k} * x_{q_{p_k}}
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple(s * other.signs[p] for s, p in zip(self.signs, self.perm))
        return SignedPermutation(perm, signs)

    def as_quaternion_map(self):
        def f(x: Quaternion) -> Quaternion:
            return Quaternion(*self.apply(x.coeffs))

        return f

    @classmethod
    def all(cls):
        out = []
        for perm in itertools.permutations(range(4)):
            for signs in itertools.product((1, -1), repeat=4):
                if int(np.prod(signs)) == 1:
                    out.append(cls(perm, signs))
        return out


def sigma_map(x: Quaternion) -> Quaternion:
    """x -> omega x conj(omega)."""
    return HURWITZ_OMEGA * x * HURWITZ_OMEGA.conj()


def tau_map(x: Quaternion) -> Quaternion:
    """x -> alpha conj(x) conj(alpha), alpha = (1 + i1)/sqrt(2); exact since alpha y conj(alpha) = (1+i1) y (1-i1) / 2."""
    a = Quaternion(1, 1)
    return a * x.conj() * a.conj() / 2


def conj_by_i1(x: Quaternion) -> Quaternion:
    return I1 * x * (-I1)


def _complexified(f):
    """Extend an R-linear map of H to complexified coefficients."""
    basis = [Quaternion(*np.eye(4, dtype=int)[k]) for k in range(4)]
    mat = np.array([[float(c) for c in f(b).coeffs] for b in basis]).T

    def g(z1):
        return mat @ np.asarray(z1, dtype=complex)

    g.matrix = mat
    return g


@dataclass(frozen=True)
class S3QuotientMaps:
    sigma: object
    tau: object
    sigma_point: object
    tau_point: object
    #: element of Sp(2, o)[p] inducing tau o tau
    tau_squared_element: GroupElement


def s3_quotient_maps() -> S3QuotientMaps:
    """The generators of the index-6 quotient, on quaternions and on quaternionic points."""
    s, t = _complexified(sigma_map), _complexified(tau_map)

    def on_point(f):
        def act(Z):
            Z = np.asarray(Z, dtype=complex).copy()
            Z[2:6] = f(Z[2:6])
            return Z

        return act

    return S3QuotientMaps(
        sigma=sigma_map,
        tau=tau_map,
        sigma_point=on_point(s),
        tau_point=on_point(t),
        tau_squared_element=scalar_element(QUATERNIONIC, I1),
    )
