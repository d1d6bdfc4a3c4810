"""Exact arithmetic in the quaternions, the Hurwitz order and the orders Z[omega], Z[i].

Quaternion coefficients are exact rationals (``Fraction``) for all lattice and
group work; complex coefficients are accepted where a complexified quaternion is
needed at an evaluation boundary (the check embedding).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Complex, Rational
from typing import Literal, Union

import numpy as np

Scalar = Union[int, Fraction, float, complex]

EISENSTEIN = "eisenstein"
GAUSS = "gauss"
Ring = Literal["eisenstein", "gauss"]

_OMEGA_C = complex(-0.5, 3**0.5 / 2)


def _frac(x):
    if isinstance(x, Rational):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class Quaternion:
    """x0 + x1*i1 + x2*i2 + x3*i3."""

    x0: Scalar = 0
    x1: Scalar = 0
    x2: Scalar = 0
    x3: Scalar = 0

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @classmethod
    def coerce(cls, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, Complex):
            return cls(other)
        return NotImplemented

    @property
    def coeffs(self) -> tuple:
        return (self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other):
        other = Quaternion.coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(*(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(*(-a for a in self.coeffs))

    def __sub__(self, other):
        other = Quaternion.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Quaternion.coerce(other)
        if other is NotImplemented:
            return other
        return qmul(self, other)

    def __rmul__(self, other):
        other = Quaternion.coerce(other)
        if other is NotImplemented:
            return other
        return qmul(other, self)

    def __truediv__(self, scalar):
        if isinstance(scalar, Rational):
            scalar = Fraction(scalar)
        return Quaternion(*(a / scalar for a in self.coeffs))

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm(self):
        return sum(a * a for a in self.coeffs)

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        return self.conj() / n

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def __repr__(self):
        return "Quaternion({})".format(", ".join(str(a) for a in self.coeffs))


ONE = Quaternion(1)
I1 = Quaternion(0, 1)
I2 = Quaternion(0, 0, 1)
I3 = Quaternion(0, 0, 0, 1)
HALF = Fraction(1, 2)
#: The Hurwitz unit (1 + i1 + i2 + i3)/2.
HURWITZ_OMEGA = Quaternion(HALF, HALF, HALF, HALF)
#: Generator of the two-sided ideal p of the Hurwitz order.
P_GENERATOR = Quaternion(1, 1)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    a0, a1, a2, a3 = a.coeffs
    b0, b1, b2, b3 = b.coeffs
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def qconj_norm(x: Quaternion):
    """Return ``(conj(x), N(x))``."""
    return x.conj(), x.norm()


def is_hurwitz(x: Quaternion) -> bool:
    """All coefficients in Z, or all in Z + 1/2."""
    try:
        doubled = [Fraction(c) * 2 for c in x.coeffs]
    except TypeError:
        return False
    if any(d.denominator != 1 for d in doubled):
        return False
    parities = {int(d) % 2 for d in doubled}
    return len(parities) == 1


def hurwitz(x0, x1=0, x2=0, x3=0) -> Quaternion:
    """Build a Hurwitz integer, rejecting non-integral coefficients."""
    q = Quaternion(x0, x1, x2, x3)
    if not is_hurwitz(q):
        raise ValueError(f"{q!r} is not a Hurwitz integer")
    return q


def hurwitz_units() -> list[Quaternion]:
    """The 24 units of the Hurwitz order."""
    units = []
    for k in range(4):
        for s in (1, -1):
            c = [0, 0, 0, 0]
            c[k] = s
            units.append(Quaternion(*c))
    for signs in np.ndindex(2, 2, 2, 2):
        units.append(Quaternion(*(HALF if s == 0 else -HALF for s in signs)))
    return units


def check_embed(x) -> np.ndarray:
    """The algebra map H (x) C -> C^{2x2}.

    Accepts a quaternion, or an array of quaternions of shape (m, n), giving a
    complex (2m, 2n) matrix.
    """
    if isinstance(x, Quaternion):
        x0, x1, x2, x3 = (complex(c) for c in x.coeffs)
        return np.array([[x0 + 1j * x1, x2 + 1j * x3], [-x2 + 1j * x3, x0 - 1j * x1]])
    arr = np.asarray(x, dtype=object)
    m, n = arr.shape
    out = np.empty((2 * m, 2 * n), dtype=complex)
    for j in range(m):
        for k in range(n):
            out[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = check_embed(arr[j, k])
    return out


def check_embed_coeffs(c) -> np.ndarray:
    """Check embedding of a complexified quaternion given by 4 complex coefficients.

    Vectorised over leading axes: ``c`` has shape (..., 4), result (..., 2, 2).
    """
    c = np.asarray(c, dtype=complex)
    out = np.empty(c.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = c[..., 0] + 1j * c[..., 1]
    out[..., 0, 1] = c[..., 2] + 1j * c[..., 3]
    out[..., 1, 0] = -c[..., 2] + 1j * c[..., 3]
    out[..., 1, 1] = c[..., 0] - 1j * c[..., 1]
    return out


def check_unembed(m) -> np.ndarray:
    """Inverse of :func:`check_embed_coeffs` on its image."""
    m = np.asarray(m, dtype=complex)
    x0 = (m[..., 0, 0] + m[..., 1, 1]) / 2
    x1 = (m[..., 0, 0] - m[..., 1, 1]) / 2j
    x2 = (m[..., 0, 1] - m[..., 1, 0]) / 2
    x3 = (m[..., 0, 1] + m[..., 1, 0]) / 2j
    return np.stack([x0, x1, x2, x3], axis=-1)


# --- residues of the Hurwitz order modulo p -------------------------------

#: Representatives of the four classes of o/p, indexed 0, 1, 2 (omega), 3 (conj omega).
RESIDUE_REPS = (Quaternion(0), ONE, HURWITZ_OMEGA, HURWITZ_OMEGA.conj())
# multiplication table of F4 in the index labelling above
_F4_MUL = np.array([[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]])


def hurwitz_residue(x: Quaternion) -> int:
    """Class of a Hurwitz integer in o/p, as an index into :data:`RESIDUE_REPS`.

    x lies in p iff N(x) is even.  Integral-coefficient elements are congruent
    to 0 or 1; half-integral ones to omega or its conjugate.
    """
    if not is_hurwitz(x):
        raise ValueError(f"{x!r} is not a Hurwitz integer")
    if x.norm() % 2 == 0:
        return 0
    if Fraction(x.x0).denominator == 1:
        return 1
    return 2 if (x - HURWITZ_OMEGA).norm() % 2 == 0 else 3


def f4_mul(a: int, b: int) -> int:
    return int(_F4_MUL[a, b])


def in_p(x: Quaternion) -> bool:
    return hurwitz_residue(x) == 0


# --- imaginary quadratic orders -------------------------------------------


@dataclass(frozen=True)
class ImagQuadInt:
    """a + b*eta with eta = omega = (-1+sqrt(-3))/2 (Eisenstein) or eta = i (Gauss)."""

    a: int
    b: int
    ring: Ring

    def __post_init__(self):
        if self.ring not in (EISENSTEIN, GAUSS):
            raise ValueError(f"unknown ring {self.ring!r}")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))

    def _coerce(self, other):
        if isinstance(other, ImagQuadInt):
            if other.ring != self.ring:
                raise TypeError(f"cannot mix {self.ring} and {other.ring} integers")
            return other
        if isinstance(other, int):
            return ImagQuadInt(other, 0, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ImagQuadInt(self.a + other.a, self.b + other.b, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return ImagQuadInt(-self.a, -self.b, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        if self.ring == GAUSS:
            return ImagQuadInt(a * c - b * d, a * d + b * c, GAUSS)
        # omega^2 = -1 - omega
        return ImagQuadInt(a * c - b * d, a * d + b * c - b * d, EISENSTEIN)

    __rmul__ = __mul__

    def conj(self) -> "ImagQuadInt":
        if self.ring == GAUSS:
            return ImagQuadInt(self.a, -self.b, GAUSS)
        return ImagQuadInt(self.a - self.b, -self.b, EISENSTEIN)

    def norm(self) -> int:
        if self.ring == GAUSS:
            return self.a**2 + self.b**2
        return self.a**2 - self.a * self.b + self.b**2

    def __complex__(self):
        eta = 1j if self.ring == GAUSS else _OMEGA_C
        return self.a + self.b * eta

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def exact_div(self, other: "ImagQuadInt") -> "ImagQuadInt | None":
        """self/other if it lies in the ring, else None."""
        other = self._coerce(other)
        num = self * other.conj()
        n = other.norm()
        if num.a % n or num.b % n:
            return None
        return ImagQuadInt(num.a // n, num.b // n, self.ring)

    def __repr__(self):
        eta = "i" if self.ring == GAUSS else "w"
        return f"({self.a}{self.b:+d}{eta})"


def iq(a: int, b: int, ring: Ring) -> ImagQuadInt:
    return ImagQuadInt(a, b, ring)


def units(ring: Ring) -> list[ImagQuadInt]:
    if ring == GAUSS:
        return [iq(1, 0, GAUSS), iq(0, 1, GAUSS), iq(-1, 0, GAUSS), iq(0, -1, GAUSS)]
    # +-1, +-omega, +-omega^2 = -+(1 + omega)
    return [iq(s * a, s * b, EISENSTEIN) for s in (1, -1) for a, b in ((1, 0), (0, 1), (-1, -1))]


#: Level generators: sqrt(-3) = 1 + 2*omega, and 1 + i.
SQRT_M3 = iq(1, 2, EISENSTEIN)
ONE_PLUS_I = iq(1, 1, GAUSS)
LEVELS = {"sqrt-3": (EISENSTEIN, SQRT_M3), "1+i": (GAUSS, ONE_PLUS_I)}


def quad_residue(x: ImagQuadInt, level: str) -> int:
    """Residue of x modulo sqrt(-3) (values 0..2) or 1+i (values 0..1).

    Both quotients are prime fields; since omega = 1 and i = 1 modulo the
    respective level, a + b*eta reduces to a + b.
    """
    try:
        ring, gen = LEVELS[level]
    except KeyError:
        raise ValueError(f"unknown level {level!r}") from None
    if x.ring != ring:
        raise ValueError(f"level {level} does not belong to the {x.ring} ring")
    p = gen.norm()
    r = (x.a + x.b) % p
    # membership by exact division is the cross-check
    assert (r == 0) == (x.exact_div(gen) is not None)
    return r


def divisible(x: ImagQuadInt, level: str) -> bool:
    return quad_residue(x, level) == 0
