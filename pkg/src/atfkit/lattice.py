"""Exact planar lattice arithmetic.

Everything here works over Python integers and :class:`fractions.Fraction`;
there is no floating point.  Vectors are immutable tuples so they can be
hashed, compared and shared freely.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

Number = Union[int, Fraction]


class LatticeError(ValueError):
    pass


class LatticeVec(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return LatticeVec(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticeVec(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return LatticeVec(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        if isinstance(k, int):
            return LatticeVec(self.x * k, self.y * k)
        return RationalPoint(Fraction(self.x) * k, Fraction(self.y) * k)

    __rmul__ = __mul__

    def __str__(self):
        return f"({self.x},{self.y})"


class RationalPoint(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number | str, y: Number | str) -> "RationalPoint":
        return cls(Fraction(x), Fraction(y))

    def __add__(self, other):  # type: ignore[override]
        return RationalPoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return RationalPoint(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return RationalPoint(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return RationalPoint(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __str__(self):
        return f"({self.x},{self.y})"


def point(x: Number | str, y: Number | str) -> RationalPoint:
    return RationalPoint(Fraction(x), Fraction(y))


def wedge(v, w) -> Number:
    """Signed determinant ``v.x*w.y - v.y*w.x``."""
    return v[0] * w[1] - v[1] * w[0]


def dot(v, w) -> Number:
    return v[0] * w[0] + v[1] * w[1]


def primitive(v) -> LatticeVec:
    """Primitive lattice vector pointing in the direction of ``v``.

    ``v`` may have rational entries; it only has to be a rational multiple
    of a lattice vector, which every rational vector is.
    """
    x, y = v[0], v[1]
    if type(x) is int and type(y) is int and (x or y):
        g = gcd(x, y)
        return LatticeVec(x // g, y // g)
    x, y = Fraction(x), Fraction(y)
    if x == 0 and y == 0:
        raise LatticeError("zero vector has no primitive direction")
    # clear denominators, then divide by the gcd
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    xi, yi = int(x * den), int(y * den)
    g = gcd(xi, yi)
    return LatticeVec(xi // g, yi // g)


def is_primitive(v) -> bool:
    if any(Fraction(c).denominator != 1 for c in v):
        return False
    x, y = int(v[0]), int(v[1])
    return gcd(x, y) == 1


def affine_length(p, q) -> Fraction:
    """Lattice length of the segment from ``p`` to ``q``.

    This is the factor ``t`` with ``q - p = t * primitive(q - p)``; it is
    invariant under integral affine maps.
    """
    d = (Fraction(q[0]) - Fraction(p[0]), Fraction(q[1]) - Fraction(p[1]))
    if d[0] == 0 and d[1] == 0:
        return Fraction(0)
    u = primitive(d)
    return d[0] / u.x if u.x != 0 else d[1] / u.y


def lattice_distance(normal, offset: Number, p) -> Fraction:
    """Lattice distance from ``p`` to the line ``<normal, x> = offset``."""
    if not is_primitive(normal):
        raise LatticeError(f"normal {tuple(normal)} is not primitive")
    return abs(Fraction(dot(normal, p)) - Fraction(offset))


def line_distance(a, direction, p) -> Fraction:
    """Lattice distance from ``p`` to the line through ``a`` along ``direction``."""
    u = primitive(direction)
    return abs(Fraction(wedge(u, (p[0] - a[0], p[1] - a[1]))))


class UnimodularMap(NamedTuple):
    """Integral 2x2 matrix ``[[a, b], [c, d]]`` with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "UnimodularMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def checked(cls, a: int, b: int, c: int, d: int) -> "UnimodularMap":
        m = cls(a, b, c, d)
        if m.det not in (1, -1):
            raise LatticeError(f"matrix {m.rows} is not unimodular")
        return m

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __call__(self, v):
        x, y = v[0] * self.a + v[1] * self.b, v[0] * self.c + v[1] * self.d
        if isinstance(v, LatticeVec):
            return LatticeVec(x, y)
        return RationalPoint(Fraction(x), Fraction(y))

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        return UnimodularMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMap":
        s = self.det
        return UnimodularMap(self.d * s, -self.b * s, -self.c * s, self.a * s)

    def __pow__(self, n: int) -> "UnimodularMap":
        base = self if n >= 0 else self.inverse()
        out = UnimodularMap.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def about(self, center, p) -> RationalPoint:
        """Apply the map as an affine map fixing ``center``."""
        v = self((Fraction(p[0]) - center[0], Fraction(p[1]) - center[1]))
        return RationalPoint(center[0] + v[0], center[1] + v[1])


def monodromy_matrix(w, n: int = 1) -> UnimodularMap:
    """Monodromy of a loop around ``n`` nodes sharing eigendirection ``w``.

    ``[[1 - n s t, n s^2], [-n t^2, 1 + n s t]]`` for ``w = (s, t)``.  The
    exponent may be negative, giving the inverse loop.  Equivalently
    ``M v = v + n * wedge(w, v) * w``.
    """
    if not is_primitive(w):
        raise LatticeError(f"eigendirection {tuple(w)} is not primitive")
    s, t = int(w[0]), int(w[1])
    return UnimodularMap(1 - n * s * t, n * s * s, -n * t * t, 1 + n * s * t)


def normal_through(u) -> LatticeVec:
    """A lattice vector ``nu`` with ``wedge(u, nu) == 1`` of smallest norm."""
    u = primitive(u)
    x, y = u
    # extended Euclid: find (a, b) with x*b - y*a = 1
    g, s, t = _egcd(x, -y)
    if g < 0:
        g, s, t = -g, -s, -t
    # x*s + (-y)*t = 1  ->  nu = (t, s)
    nu = LatticeVec(t, s)
    # slide along u to minimise |nu|; ties broken towards the lexicographically larger
    best = None
    norm2 = x * x + y * y
    k0 = -Fraction(dot(nu, u), norm2)
    for k in (int(k0) - 1, int(k0), int(k0) + 1):
        cand = nu + u * k
        key = (dot(cand, cand), -cand.x, -cand.y)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0)
    g, s, t = _egcd(b, a % b)
    return (g, t, s - (a // b) * t)


def frac_str(q: Number) -> str:
    """Serialise a rational as ``num/den`` (reduced, positive denominator)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s: str | int | Fraction) -> Fraction:
    return Fraction(s)
