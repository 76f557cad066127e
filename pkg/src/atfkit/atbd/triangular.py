"""Triangular diagrams built directly from Markov equation data.

Edges are traversed counterclockwise as ``u3 = (1, 0)``, ``u2``, ``u1`` with
affine lengths ``k3 c^2``, ``k2 b^2``, ``k1 a^2`` (times a scale), so cut ``i``
sits at the vertex opposite edge ``u_i``.  Cuts 1 and 2 have directions
``(x, p)`` and ``(y, q)``; the cut integers solve

    n2 q k1 a^2 y - n1 p k2 b^2 x = K k1 k2 k3 a b c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional, Sequence

from ..lattice import LatticeVec, RationalPoint, _egcd, point, primitive, wedge
from ..markov import MarkovEqnII, derive_type_I_data
from .diagram import ATBD, Cut, DiagramError, Kind, on_eigenline, validate
from .operations import _param_along as _param


@dataclass(frozen=True)
class TriangularSpec:
    eq: MarkovEqnII
    triple: tuple[int, int, int]
    nodes: tuple[int, int, int]
    x: int
    y: int
    scale: Fraction = Fraction(1)
    pqr: Optional[tuple[int, int, int]] = None

    def cut_identity_holds(self) -> bool:
        _, _, (p, q, _) = derive_type_I_data(self.eq, self.triple, self.nodes, self.pqr)
        A, B, R = _cut_coefficients(self.eq, self.triple, self.nodes, p, q)
        return A * self.y - B * self.x == R


def _cut_coefficients(eq, t, nodes, p, q):
    k1, k2, k3 = eq.coeffs
    a, b, c = t
    n1, n2, _ = nodes
    return n2 * q * k1 * a * a, n1 * p * k2 * b * b, eq.K * k1 * k2 * k3 * a * b * c


def equidistant_point(verts: Sequence[RationalPoint]) -> tuple[RationalPoint, Fraction]:
    """The interior point at equal lattice distance from the three edge lines."""
    rows = []
    for i in range(3):
        a, b = verts[i], verts[(i + 1) % 3]
        u = primitive(b - a)
        nx, ny = -u.y, u.x  # inward for a ccw triangle
        # <n, m> - delta = <n, a>
        rows.append((Fraction(nx), Fraction(ny), Fraction(-1), nx * a[0] + ny * a[1]))
    sol = _solve3(rows)
    if sol[2] <= 0:
        raise DiagramError("triangle has no interior equidistant point")
    return RationalPoint(sol[0], sol[1]), sol[2]


def _solve3(rows):
    m = [list(r) for r in rows]
    for col in range(3):
        piv = next(r for r in range(col, 3) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(3):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [m[r][j] - f * m[col][j] for j in range(4)]
    return [m[i][3] / m[i][i] for i in range(3)]


def build_triangular(spec: TriangularSpec) -> ATBD:
    lam, _, (p, q, r) = derive_type_I_data(spec.eq, spec.triple, spec.nodes, spec.pqr)
    A, B, R = _cut_coefficients(spec.eq, spec.triple, spec.nodes, p, q)
    if A * spec.y - B * spec.x != R:
        raise DiagramError("cut integers violate the triangle identity")
    n1, n2, n3 = spec.nodes
    k1, k2, k3 = spec.eq.coeffs
    a, b, c = spec.triple
    u3 = LatticeVec(1, 0)
    u1 = LatticeVec(1 - n2 * spec.y * q, -n2 * q * q)
    u2 = LatticeVec(1 + n1 * spec.x * p, n1 * p * p)
    s = Fraction(spec.scale)
    v0 = point(0, 0)
    v1 = v0 + u3 * (s * k3 * c * c)
    v2 = v1 + u2 * (s * k2 * b * b)
    if v2 + u1 * (s * k1 * a * a) != v0:
        raise DiagramError("edge directions do not close up")
    verts = (v0, v1, v2)
    m, _ = equidistant_point(verts)
    w1 = LatticeVec(spec.x, p)
    w2 = LatticeVec(spec.y, q)
    w3 = primitive(u1 - u2)
    cuts = (
        Cut(w1, Kind.RAY, (1,), (Fraction(1),)),
        Cut(w2, Kind.RAY, (0,), (Fraction(1),)),
        Cut(w3, Kind.RAY, (2,), (Fraction(1),)),
    )
    d = ATBD(verts, ("cut:1", "cut:0", "cut:2"), cuts, m)
    for ci in range(3):
        if not on_eigenline(d, ci, m):
            raise DiagramError(f"eigenline of cut {ci + 1} misses the monotone point")
    placed = []
    for cut, count in zip(cuts, (n1, n2, n3)):
        base = verts[cut.base[0]]
        tm = _param(base, cut.direction, m)
        if tm <= 0:
            raise DiagramError("cut points away from the monotone point")
        placed.append(Cut(cut.direction, cut.kind, cut.base, tuple(tm * j / (count + 1) for j in range(1, count + 1))))
    d = ATBD(verts, d.roles, tuple(placed), m)
    rep = validate(d)
    if not rep.ok:
        raise DiagramError("triangle construction failed: " + "; ".join(rep.violations))
    return d


def cut_integer_candidates(eq: MarkovEqnII, t, nodes, pqr=None) -> Iterator[tuple[int, int]]:
    """Solutions ``(x, y)`` of the cut identity, ordered by ``|x|``."""
    _, _, (p, q, _) = derive_type_I_data(eq, t, nodes, pqr)
    A, B, R = _cut_coefficients(eq, t, nodes, p, q)
    g, s, u = _egcd(A, -B)
    if g < 0:
        g, s, u = -g, -s, -u
    if R % g:
        return
    # A*(s R/g) + (-B)*(u R/g) = R -> y0 = s R/g, x0 = u R/g
    y0, x0 = s * R // g, u * R // g
    step_x, step_y = A // g, B // g
    # x = x0 + k step_x ; choose k around -x0/step_x
    k0 = -x0 // step_x
    ks = sorted(range(k0 - 6, k0 + 7), key=lambda k: (abs(x0 + k * step_x), k))
    for k in ks:
        yield x0 + k * step_x, y0 + k * step_y


def triangular_for(eq: MarkovEqnII, t, nodes, scale=1, pqr=None) -> ATBD:
    """Build with the minimal-|x| cut integers whose eigenlines meet at the monotone point."""
    errors = []
    for x, y in cut_integer_candidates(eq, t, nodes, pqr):
        try:
            return build_triangular(TriangularSpec(eq, tuple(t), tuple(nodes), x, y, Fraction(scale), pqr))
        except DiagramError as exc:
            errors.append(f"(x,y)=({x},{y}): {exc}")
    raise DiagramError("no admissible cut integers; tried " + "; ".join(errors[:4]))
