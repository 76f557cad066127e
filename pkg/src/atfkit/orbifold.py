"""Limit orbifolds of straight-cut diagrams and their intersection theory.

Deleting the cuts of a diagram restores the corners at the cut bases; the
result is the moment polygon of a toric orbifold.  Each edge is a divisor
``D_i``; with ccw edge directions ``u`` the pairings are

    D_i . D_i     = -wedge(u_{i-1}, u_{i+1}) / (wedge(u_{i-1}, u_i) wedge(u_i, u_{i+1}))
    D_i . D_{i+1} = 1 / wedge(u_i, u_{i+1})

and the anticanonical degree is the sum of all entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atbd.analysis import hull_canonical, is_triangular, profile
from .atbd.diagram import ATBD, DiagramError, Kind, corner_defect
from .lattice import LatticeVec, RationalPoint, affine_length, primitive, wedge


class OrbifoldError(DiagramError):
    pass


@dataclass(frozen=True)
class LimitOrbifold:
    vertices: tuple[RationalPoint, ...]
    edge_directions: tuple[LatticeVec, ...]
    corner_orders: tuple[int, ...]
    edge_lengths: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def normals(self) -> list[LatticeVec]:
        """Primitive inward normals, i.e. the fan rays."""
        return [LatticeVec(-u.y, u.x) for u in self.edge_directions]


def limit_orbifold(d: ATBD) -> LimitOrbifold:
    if any(c.kind is Kind.SEAM for c in d.cuts):
        raise OrbifoldError("limit orbifold needs ray cuts; canonicalize first")
    n = len(d)
    dirs = tuple(d.edge_dir(i) for i in range(n))
    orders = []
    for i in range(n):
        w = wedge(dirs[i - 1], dirs[i])
        if w <= 0:
            raise OrbifoldError(f"limit polygon is not strictly convex at vertex {i}")
        orders.append(w)
    lengths = tuple(affine_length(*d.edge(i)) for i in range(n))
    return LimitOrbifold(d.vertices, dirs, tuple(orders), lengths)


def divisor_self_intersection(o: LimitOrbifold, i: int) -> Fraction:
    n = len(o)
    u = o.edge_directions
    prev, cur, nxt = u[(i - 1) % n], u[i % n], u[(i + 1) % n]
    return -Fraction(wedge(prev, nxt), wedge(prev, cur) * wedge(cur, nxt))


def intersection_matrix(o: LimitOrbifold) -> list[list[Fraction]]:
    n = len(o)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = divisor_self_intersection(o, i)
        j = (i + 1) % n
        # the corner between edges i and i+1 is vertex i+1
        mat[i][j] = mat[j][i] = Fraction(1, o.corner_orders[j])
    return mat


def degree(o: LimitOrbifold) -> Fraction:
    """Anticanonical self-intersection ``K.K`` from the full pairing matrix."""
    return sum((sum(row) for row in intersection_matrix(o)), Fraction(0))


def triangle_degree(lengths: Sequence[Fraction], orders_opposite: Sequence[int]) -> Fraction:
    """``(A + B + C)^2 lambda^2 / (m1 m2 m3)`` with ``lambda = m_i / L_i``."""
    lams = {Fraction(m) / L for m, L in zip(orders_opposite, lengths)}
    if len(lams) != 1:
        raise OrbifoldError("lambda ratios disagree")
    lam = lams.pop()
    m1, m2, m3 = orders_opposite
    return sum(lengths, Fraction(0)) ** 2 * lam * lam / (m1 * m2 * m3)


def checked_degree(d: ATBD) -> Fraction:
    """Degree of the limit orbifold, cross-checked by the triangle formula when it applies."""
    o = limit_orbifold(d)
    deg = degree(o)
    if len(o) == 3:
        opp = [o.corner_orders[(i + 2) % 3] for i in range(3)]
        tri = triangle_degree(o.edge_lengths, opp)
        if tri != deg:
            raise OrbifoldError(f"degree mismatch: matrix {deg}, triangle formula {tri}")
    hidden = any(c.kind is Kind.RAY and corner_defect(d, c.base[0]) == 1 for c in d.cuts)
    # a hidden corner carries no node type, so the node-type formula does not apply
    if is_triangular(d) and not hidden:
        prof = profile(d)
        ns, ps = prof.ns, prof.ps
        tri = sum(prof.length_type, Fraction(0)) ** 2 * prof.lam ** 2 / (
            ns[0] * ns[1] * ns[2] * (ps[0] * ps[1] * ps[2]) ** 2
        )
        if tri != deg:
            raise OrbifoldError(f"degree mismatch: matrix {deg}, node-type formula {tri}")
    return deg


# -- predicted hull ----------------------------------------------------------------

@dataclass(frozen=True)
class HullPolygon:
    vertices: tuple[LatticeVec, ...]

    def __len__(self) -> int:
        return len(self.vertices)


def convex_hull(points) -> tuple[LatticeVec, ...]:
    """Strict ccw convex hull (monotone chain), starting at the least point."""
    pts = sorted(set(LatticeVec(int(p[0]), int(p[1])) for p in points))
    if len(pts) < 3:
        return tuple(pts)

    def half(seq):
        out: list[LatticeVec] = []
        for p in seq:
            while len(out) >= 2 and wedge(out[-1] - out[-2], p - out[-1]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return tuple(lower[:-1] + upper[:-1])


def predicted_hull(d: ATBD) -> HullPolygon:
    return HullPolygon(convex_hull(limit_orbifold(d).normals()))


def hull_edge_lengths(h: HullPolygon) -> list[int]:
    n = len(h)
    return [int(affine_length(h.vertices[i], h.vertices[(i + 1) % n])) for i in range(n)]


def corner_affine_angle(h: HullPolygon, vertex) -> int:
    v = LatticeVec(*vertex)
    if v not in h.vertices:
        raise OrbifoldError(f"{tuple(v)} is not a hull vertex")
    i = h.vertices.index(v)
    n = len(h)
    a = primitive(h.vertices[(i - 1) % n] - v)
    b = primitive(h.vertices[(i + 1) % n] - v)
    return abs(wedge(a, b))


def hull_equivalent(h1: HullPolygon, points) -> bool:
    """Unimodular equivalence of ``h1`` with the hull of ``points``."""
    return hull_canonical(h1.vertices) == hull_canonical(convex_hull(points))
