"""Invariants read off a diagram: profile, canonical form, equivalence."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt
from typing import Optional

from ..lattice import LatticeVec, UnimodularMap, _egcd, affine_length, frac_str, primitive, wedge
from .diagram import ATBD, DELZANT, DiagramError, Kind
from .io import dumps
from .operations import _Builder, place_nodes_canonically, transfer_cut, transform


@dataclass(frozen=True)
class Profile:
    node_type: tuple[tuple[int, int], ...]
    length_type: tuple[Fraction, ...]
    lam: Optional[Fraction]

    @property
    def ps(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.node_type)

    @property
    def ns(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.node_type)

    def normalized_lengths(self) -> tuple[Fraction, ...]:
        g = min(self.length_type)
        return tuple(L / g for L in self.length_type)


def is_triangular(d: ATBD) -> bool:
    return (
        len(d) == 3
        and len(d.cuts) == 3
        and all(c.kind is Kind.RAY for c in d.cuts)
        and sorted(c.base[0] for c in d.cuts) == [0, 1, 2]
    )


def profile(d: ATBD) -> Profile:
    """Node type per cut and length type; lambda for triangular diagrams.

    For a triangle the length slot of cut ``i`` is the edge opposite its base.
    Otherwise the length type lists every edge in polygon order.
    """
    if any(c.kind is Kind.SEAM for c in d.cuts):
        raise DiagramError("profile needs ray cuts only; transfer seams first")
    nodes = []
    for ci, cut in enumerate(d.cuts):
        b = cut.base[0]
        det = abs(wedge(d.e_in(b), d.e_out(b)))
        if det % cut.n:
            raise DiagramError(f"non-integral node type at cut {ci}")
        p = isqrt(det // cut.n)
        if p * p * cut.n != det:
            raise DiagramError(f"non-integral node type at cut {ci}")
        nodes.append((cut.n, p))
    if is_triangular(d):
        lengths = []
        for cut in d.cuts:
            b = cut.base[0]
            lengths.append(affine_length(d.vertex(b + 1), d.vertex(b + 2)))
        lams = {Fraction(n * p * p) / L for (n, p), L in zip(nodes, lengths)}
        if len(lams) != 1:
            raise DiagramError("lambda ratios disagree")
        return Profile(tuple(nodes), tuple(lengths), lams.pop())
    lengths = [affine_length(*d.edge(i)) for i in range(len(d))]
    return Profile(tuple(nodes), tuple(lengths), None)


# -- canonical form ------------------------------------------------------------

def _straighten(d: ATBD) -> ATBD:
    while any(c.kind is Kind.SEAM for c in d.cuts):
        ci = next(i for i, c in enumerate(d.cuts) if c.kind is Kind.SEAM)
        d = transfer_cut(d, ci, "left")
    return d


def _normalizer(e0: LatticeVec, e1: LatticeVec) -> UnimodularMap:
    """SL2Z map sending ``e0`` to ``(1, 0)`` with the image of ``e1`` sheared into a fundamental range."""
    x, y = e0
    # rows (a, b) and (-y, x) with a x + b y = 1
    g, a, b = _egcd(x, y)
    if g < 0:
        a, b = -a, -b
    U = UnimodularMap(a, b, -y, x)
    f = U(e1)
    if f.y != 0:
        k = _shear_k(f.x, f.y)
        U = UnimodularMap(1, k, 0, 1) @ U
    return U


def _shear_k(fx: int, fy: int) -> int:
    # smallest k with 0 <= fx + k fy < |fy|
    if fy > 0:
        return -(fx // fy)
    return fx // (-fy)


def canonicalize(d: ATBD) -> ATBD:
    """Least serialization over all SL2Z images and starting vertices."""
    d = _straighten(d)
    d = place_nodes_canonically(d)
    d = _Builder(d).build()
    n = len(d)
    best = None
    for s in range(n):
        e0 = d.e_out(s)
        nxt = s + 1
        while wedge(e0, d.e_out(nxt)) == 0:
            nxt += 1
        U = _normalizer(e0, d.e_out(nxt))
        origin = d.monotone_point if d.monotone_point is not None else d.vertex(s)
        moved = transform(d, U)
        shift = -U(origin)
        moved = transform(moved, UnimodularMap.identity(), shift)
        cand = _rotate(moved, s).with_label("")
        key = _sort_key(cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1].with_label(d.label)


def _rotate(d: ATBD, s: int) -> ATBD:
    """Start the vertex list at ``s`` and order cuts by base vertex."""
    n = len(d)
    verts = d.vertices[s:] + d.vertices[:s]
    old_roles = d.roles[s:] + d.roles[:s]
    cuts_sorted = sorted(range(len(d.cuts)), key=lambda ci: (d.cuts[ci].base[0] - s) % n)
    remap = {old: new for new, old in enumerate(cuts_sorted)}
    roles = []
    for r in old_roles:
        if r == DELZANT:
            roles.append(r)
        else:
            kind, idx = r.split(":")
            roles.append(f"{kind}:{remap[int(idx)]}")
    cuts = tuple(
        replace(d.cuts[ci], base=tuple((b - s) % n for b in d.cuts[ci].base)) for ci in cuts_sorted
    )
    return replace(d, vertices=verts, roles=tuple(roles), cuts=cuts)


def _sort_key(d: ATBD):
    return (
        tuple((v.x, v.y) for v in d.vertices),
        d.roles,
        tuple((c.kind.value, tuple(c.direction), c.base, c.nodes) for c in d.cuts),
    )


def equivalent(d1: ATBD, d2: ATBD) -> bool:
    return dumps(canonicalize(d1).with_label("")) == dumps(canonicalize(d2).with_label(""))


def hull_canonical(points) -> tuple:
    """Canonical form of a convex lattice polygon given by its ccw vertices."""
    pts = list(points)
    n = len(pts)
    best = None
    for s in range(n):
        e0 = primitive(pts[(s + 1) % n] - pts[s])
        e1 = primitive(pts[(s + 2) % n] - pts[(s + 1) % n])
        U = _normalizer(e0, e1)
        base = U(pts[s])
        cand = tuple(tuple(U(pts[(s + i) % n]) - base) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


def describe(d: ATBD) -> str:
    labels = ", ".join(f"({c.direction.x},{c.direction.y})x{c.n}" for c in d.cuts)
    return f"{len(d)} vertices, cuts [{labels}], area {frac_str(d.area())}"
