"""The almost toric base diagram data model and its validity check.

Conventions used throughout the package:

* vertices are listed counterclockwise, so the interior lies to the left of
  every edge;
* a cut direction ``w`` points from the cut's base vertex towards its nodes;
* crossing a ray cut from its right side to its left side (relative to
  ``w``) continues tangent vectors by ``M_w^k`` where ``k`` counts the nodes
  of the cut lying beyond the crossing point.  With this convention a
  nodal trade at a Delzant corner straightens the corner, and at every cut
  base ``M_w^{-n} e_in`` continues the incoming edge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional, Sequence

from ..lattice import (
    LatticeVec,
    RationalPoint,
    is_primitive,
    line_distance,
    monodromy_matrix,
    point,
    primitive,
    wedge,
    dot,
)


class DiagramError(ValueError):
    pass


class Kind(str, enum.Enum):
    RAY = "ray"
    SEAM = "seam"


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def parse(cls, value) -> "Side":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


DELZANT = "delzant"


@dataclass(frozen=True)
class Cut:
    """A branch cut.

    For a ray, ``base`` holds one vertex index and ``nodes`` the parameters
    ``t`` of the node points ``base + t * direction`` in increasing order.
    For a seam (the notch left by an almost toric blowup), ``base`` holds the
    notch's start and end vertex indices; the single node sits at the apex
    vertex between them and ``nodes`` is ``(0,)``.  ``direction`` is then the
    eigendirection, parallel to the blown-up edge.
    """

    direction: LatticeVec
    kind: Kind
    base: tuple[int, ...]
    nodes: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class ATBD:
    vertices: tuple[RationalPoint, ...]
    roles: tuple[str, ...]
    cuts: tuple[Cut, ...] = ()
    monotone_point: Optional[RationalPoint] = None
    label: str = ""

    # -- basic geometry -------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> RationalPoint:
        return self.vertices[i % len(self.vertices)]

    def edge(self, i: int) -> tuple[RationalPoint, RationalPoint]:
        return self.vertex(i), self.vertex(i + 1)

    def edge_dir(self, i: int) -> LatticeVec:
        a, b = self.edge(i)
        return primitive(b - a)

    def e_in(self, i: int) -> LatticeVec:
        return self.edge_dir(i - 1)

    def e_out(self, i: int) -> LatticeVec:
        return self.edge_dir(i)

    def with_label(self, label: str) -> "ATBD":
        return replace(self, label=label)

    def cut_at(self, vertex: int) -> Optional[int]:
        role = self.roles[vertex]
        if role.startswith("cut:"):
            return int(role[4:])
        return None

    def node_points(self, ci: int) -> list[RationalPoint]:
        cut = self.cuts[ci]
        if cut.kind is Kind.SEAM:
            return [self.vertex(seam_apex(self, ci))]
        b = self.vertex(cut.base[0])
        return [b + cut.direction * t for t in cut.nodes]

    def cut_segment(self, ci: int) -> tuple[RationalPoint, RationalPoint]:
        cut = self.cuts[ci]
        b = self.vertex(cut.base[0])
        return b, b + cut.direction * cut.nodes[-1]

    def seam_edges(self) -> set[int]:
        """Indices of polygon edges that are glued seam segments."""
        out = set()
        for ci, cut in enumerate(self.cuts):
            if cut.kind is Kind.SEAM:
                s = cut.base[0]
                out.add(s % len(self))
                out.add((s + 1) % len(self))
        return out

    def area(self) -> Fraction:
        return signed_area(self.vertices)

    def labels(self) -> list[LatticeVec]:
        """The ``(m, n)`` label of every cut: its direction, base towards nodes."""
        return [c.direction for c in self.cuts]


def seam_apex(d: ATBD, ci: int) -> int:
    return (d.cuts[ci].base[0] + 1) % len(d)


def make_diagram(
    vertices: Sequence,
    roles: Optional[Sequence[str]] = None,
    cuts: Sequence[Cut] = (),
    monotone_point=None,
    label: str = "",
) -> ATBD:
    verts = tuple(point(*v) for v in vertices)
    if roles is None:
        roles = [DELZANT] * len(verts)
    mp = point(*monotone_point) if monotone_point is not None else None
    return ATBD(verts, tuple(roles), tuple(cuts), mp, label)


# -- exact planar geometry ------------------------------------------------

def orient(a, b, c) -> Fraction:
    return wedge((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1]))


def signed_area(verts: Sequence) -> Fraction:
    s = Fraction(0)
    n = len(verts)
    for i in range(n):
        s += wedge(verts[i], verts[(i + 1) % n])
    return s / 2


def on_segment(p, a, b) -> bool:
    # bounding box first: it rejects most queries without multiplying
    if not (min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])):
        return False
    return orient(a, b, p) == 0


def segments_intersect(a, b, c, e) -> bool:
    """Closed segments ``[a, b]`` and ``[c, e]`` share a point."""
    o1, o2 = orient(a, b, c), orient(a, b, e)
    o3, o4 = orient(c, e, a), orient(c, e, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return on_segment(c, a, b) or on_segment(e, a, b) or on_segment(a, c, e) or on_segment(b, c, e)


def locate(p, verts: Sequence) -> str:
    """``"inside"``, ``"boundary"`` or ``"outside"`` for a simple polygon."""
    n = len(verts)
    inside = False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if on_segment(p, a, b):
            return "boundary"
        if (a[1] > p[1]) != (b[1] > p[1]):
            # the edge crosses the horizontal through p to the right of p
            dy = b[1] - a[1]
            cross = (a[0] - p[0]) * dy + (p[1] - a[1]) * (b[0] - a[0])
            if (cross > 0) == (dy > 0) and cross != 0:
                inside = not inside
    return "inside" if inside else "outside"


def is_simple(verts: Sequence) -> bool:
    n = len(verts)
    if n < 3 or len(set(verts)) != n:
        return False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, e = verts[j], verts[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges: only the shared vertex may be common
                shared = b if j == i + 1 else a
                other_a = a if j == i + 1 else b
                other_c = e if j == i + 1 else c
                if orient(other_a, shared, other_c) == 0 and dot(
                    (other_a[0] - shared[0], other_a[1] - shared[1]),
                    (other_c[0] - shared[0], other_c[1] - shared[1]),
                ) > 0:
                    return False
                continue
            if segments_intersect(a, b, c, e):
                return False
    return True


@dataclass(frozen=True)
class RayHit:
    t: Fraction
    point: RationalPoint
    edge: int
    vertex: Optional[int]


def ray_first_hit(d: ATBD, origin, direction, skip_vertex: Optional[int] = None) -> RayHit:
    """First boundary point of ``origin + t * direction`` with ``t > 0``."""
    best: Optional[RayHit] = None
    n = len(d)
    for i in range(n):
        a, b = d.edge(i)
        e = (b[0] - a[0], b[1] - a[1])
        denom = wedge(direction, e)
        rel = (a[0] - origin[0], a[1] - origin[1])
        if denom == 0:
            if wedge(rel, direction) != 0:
                continue
            # collinear: the ray runs along this edge; take the nearer endpoint
            cands = []
            for k, v in ((i, a), ((i + 1) % n, b)):
                t = _param(origin, direction, v)
                if t > 0:
                    cands.append((t, v, k))
            for t, v, k in cands:
                if best is None or t < best.t:
                    best = RayHit(t, v, i, k)
            continue
        t = Fraction(wedge(rel, e)) / denom
        s = Fraction(wedge(rel, direction)) / denom
        if t <= 0 or s < 0 or s > 1:
            continue
        p = RationalPoint(Fraction(origin[0]) + t * direction[0], Fraction(origin[1]) + t * direction[1])
        vtx = i if s == 0 else ((i + 1) % n if s == 1 else None)
        if vtx is not None and vtx == skip_vertex:
            continue
        if best is None or t < best.t:
            best = RayHit(t, p, i, vtx)
    if best is None:
        raise DiagramError("ray leaves the diagram without hitting its boundary")
    return best


def _param(origin, direction, p) -> Fraction:
    if direction[0] != 0:
        return (Fraction(p[0]) - origin[0]) / direction[0]
    return (Fraction(p[1]) - origin[1]) / direction[1]


def on_eigenline(d: ATBD, ci: int, p) -> bool:
    cut = d.cuts[ci]
    if cut.kind is Kind.SEAM:
        a = d.vertex(seam_apex(d, ci))
    else:
        a = d.vertex(cut.base[0])
    return wedge(cut.direction, (p[0] - a[0], p[1] - a[1])) == 0


# -- validation --------------------------------------------------------------

@dataclass
class Report:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        if msg not in self.violations:
            self.violations.append(msg)

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self) -> Iterator[str]:
        return iter(self.violations)


def corner_defect(d: ATBD, i: int) -> int:
    """Corner wedge at vertex ``i`` after undoing the monodromy of its cut.

    0 means the boundary is straight in the true affine structure, 1 a
    smooth (Delzant) corner.  Only meaningful at ray cut bases.
    """
    ci = d.cut_at(i)
    ein, eout = d.e_in(i), d.e_out(i)
    if ci is None:
        return wedge(ein, eout)
    cut = d.cuts[ci]
    corrected = monodromy_matrix(cut.direction, -cut.n)(ein)
    return wedge(corrected, eout)


def _as_int(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q


def integral_scale(d: ATBD) -> int:
    """Least ``L`` such that ``L d`` has integer vertices, nodes and monotone point."""
    pts = list(d.vertices)
    if d.monotone_point is not None:
        pts.append(d.monotone_point)
    # node points b + t w have denominators dividing lcm(den b, den t)
    dens = [Fraction(c).denominator for p in pts for c in p]
    dens += [Fraction(t).denominator for c in d.cuts for t in c.nodes]
    return lcm(*dens)


def _integral(d: ATBD) -> ATBD:
    """A positive multiple of ``d`` with integer coordinates.

    Every invariant is scale free, and integer predicates are much cheaper
    than rational ones.
    """
    L = integral_scale(d)
    if L == 1 and all(type(c) is int for p in d.vertices for c in p):
        return d
    verts = tuple(RationalPoint(_as_int(v[0] * L), _as_int(v[1] * L)) for v in d.vertices)
    cuts = tuple(replace(c, nodes=tuple(_as_int(t * L) for t in c.nodes)) if c.kind is Kind.RAY else c
                 for c in d.cuts)
    m = d.monotone_point
    if m is not None:
        m = RationalPoint(_as_int(m[0] * L), _as_int(m[1] * L))
    return replace(d, vertices=verts, cuts=cuts, monotone_point=m)


def validate(d: ATBD) -> Report:
    """Check every structural invariant; never raises."""
    rep = Report()
    try:
        _validate(_integral(d), rep)
    except Exception as exc:  # malformed input must still produce a report
        rep.add(f"malformed diagram: {exc}")
    return rep


def _validate(d: ATBD, rep: Report) -> None:
    n = len(d.vertices)
    if n < 3:
        rep.add("polygon needs at least three vertices")
        return
    if len(d.roles) != n:
        rep.add("one role per vertex required")
        return
    if not is_simple(d.vertices):
        rep.add("polygon is not simple")
        return
    if signed_area(d.vertices) <= 0:
        rep.add("vertices must be counterclockwise")
        return

    claimed: dict[int, list[int]] = {}
    for i, role in enumerate(d.roles):
        if role == DELZANT:
            w = wedge(d.e_in(i), d.e_out(i))
            if w != 1:
                rep.add(f"vertex {i} marked delzant has corner determinant {w}")
        elif role.startswith("cut:") or role.startswith("apex:"):
            ci = int(role.split(":")[1])
            if ci >= len(d.cuts):
                rep.add(f"vertex {i} refers to missing cut {ci}")
            else:
                claimed.setdefault(ci, []).append(i)
        else:
            rep.add(f"vertex {i} has unknown role {role!r}")

    for ci, cut in enumerate(d.cuts):
        if not is_primitive(cut.direction):
            rep.add(f"cut {ci} direction {tuple(cut.direction)} is not primitive")
            continue
        if cut.n < 1:
            rep.add(f"cut {ci} has no nodes")
            continue
        if cut.kind is Kind.RAY:
            _validate_ray(d, ci, rep)
        else:
            _validate_seam(d, ci, rep)
        expected = sorted(list(cut.base) + ([seam_apex(d, ci)] if cut.kind is Kind.SEAM else []))
        if sorted(claimed.get(ci, [])) != expected:
            rep.add(f"cut base vertex must have CUT_BASE role (cut {ci})")

    # ray cuts pairwise disjoint
    rays = [ci for ci, c in enumerate(d.cuts) if c.kind is Kind.RAY]
    for x in range(len(rays)):
        for y in range(x + 1, len(rays)):
            a, b = d.cut_segment(rays[x])
            c, e = d.cut_segment(rays[y])
            if segments_intersect(a, b, c, e):
                rep.add(f"cuts {rays[x]} and {rays[y]} intersect")

    if d.monotone_point is not None:
        m = d.monotone_point
        if locate(m, d.vertices) != "inside":
            rep.add("monotone point is not interior")
        for ci in rays:
            a, b = d.cut_segment(ci)
            if on_segment(m, a, b):
                rep.add(f"monotone point lies on cut {ci}")


def _validate_ray(d: ATBD, ci: int, rep: Report) -> None:
    cut = d.cuts[ci]
    if len(cut.base) != 1:
        rep.add(f"ray cut {ci} needs exactly one base vertex")
        return
    b = cut.base[0]
    if not 0 <= b < len(d):
        rep.add(f"cut {ci} base index out of range")
        return
    if d.roles[b] != f"cut:{ci}":
        rep.add(f"cut base vertex must have CUT_BASE role (cut {ci})")
    ts = list(cut.nodes)
    if any(t <= 0 for t in ts) or any(ts[k] >= ts[k + 1] for k in range(len(ts) - 1)):
        rep.add(f"cut {ci} node parameters must be positive and strictly increasing")
        return
    for k, p in enumerate(d.node_points(ci)):
        if locate(p, d.vertices) != "inside":
            rep.add(f"cut {ci} node {k} is not interior")
    base, tip = d.cut_segment(ci)
    for i in range(len(d)):
        a, e = d.edge(i)
        if i == b or (i + 1) % len(d) == b:
            continue
        if segments_intersect(base, tip, a, e):
            rep.add(f"cut {ci} meets the boundary away from its base")
            break
    defect = corner_defect(d, b)
    if defect == 0:
        if dot(monodromy_matrix(cut.direction, -cut.n)(d.e_in(b)), d.e_out(b)) <= 0:
            rep.add(f"cut {ci}: monodromy reverses the boundary at its base")
    elif defect != 1:
        rep.add(f"cut {ci}: edges at the base are not related by the monodromy (defect {defect})")


def _validate_seam(d: ATBD, ci: int, rep: Report) -> None:
    cut = d.cuts[ci]
    n = len(d)
    if len(cut.base) != 2 or cut.n != 1:
        rep.add(f"seam cut {ci} needs two base vertices and one node")
        return
    s, e = cut.base
    apex = (s + 1) % n
    if (apex + 1) % n != e:
        rep.add(f"seam cut {ci}: base vertices must flank the apex")
        return
    if d.roles[apex] != f"apex:{ci}":
        rep.add(f"seam cut {ci}: apex vertex must have the apex role")
    M = monodromy_matrix(cut.direction, cut.n)
    A = d.vertex(apex)
    if M.about(A, d.vertex(e)) != d.vertex(s):
        rep.add(f"seam cut {ci}: segments are not identified by the monodromy")
    glued = wedge(d.e_in(s), M(d.e_out(e)))
    if glued not in (0, 1):
        rep.add(f"seam cut {ci}: boundary does not continue across the seam")
    elif glued == 0 and dot(d.e_in(s), M(d.e_out(e))) <= 0:
        rep.add(f"seam cut {ci}: boundary folds back across the seam")


def edge_distances(d: ATBD, p=None) -> list[Fraction]:
    """Lattice distance from ``p`` (default: the monotone point) to each non-seam edge line."""
    p = d.monotone_point if p is None else p
    seams = d.seam_edges()
    return [line_distance(d.vertex(i), d.edge_dir(i), p) for i in range(len(d)) if i not in seams]


def is_monotone(d: ATBD) -> bool:
    """Equal lattice distance to every boundary edge, and every eigenline through the point."""
    if d.monotone_point is None:
        raise DiagramError("diagram has no monotone point")
    dists = edge_distances(d)
    if len(set(dists)) != 1:
        return False
    return all(on_eigenline(d, ci, d.monotone_point) for ci in range(len(d.cuts)))


def monotone_distance(d: ATBD) -> Fraction:
    dists = edge_distances(d)
    if len(set(dists)) != 1:
        raise DiagramError("edges are not equidistant from the monotone point")
    return dists[0]
