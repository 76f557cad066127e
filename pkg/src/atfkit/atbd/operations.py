"""Operations on almost toric base diagrams.

Every operation returns a new validated :class:`ATBD`.  Internally the
diagram is unpacked into a small mutable builder whose vertex tags refer to
cuts by a stable key, so vertices can be inserted, removed and remapped
without re-indexing cuts by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from ..lattice import (
    LatticeVec,
    RationalPoint,
    UnimodularMap,
    affine_length,
    is_primitive,
    monodromy_matrix,
    normal_through,
    point,
    primitive,
    wedge,
)
from .diagram import (
    ATBD,
    DELZANT,
    Cut,
    DiagramError,
    Kind,
    Side,
    corner_defect,
    locate,
    on_segment,
    on_eigenline,
    ray_first_hit,
    seam_apex,
    segments_intersect,
    validate,
)


# -- builder -----------------------------------------------------------------

@dataclass
class _CutRec:
    direction: LatticeVec
    kind: Kind
    nodes: list[Fraction]


class _Builder:
    def __init__(self, d: ATBD):
        self.pts: list[RationalPoint] = list(d.vertices)
        self.tags: list = []
        for role in d.roles:
            if role == DELZANT:
                self.tags.append(DELZANT)
            else:
                kind, idx = role.split(":")
                self.tags.append((kind, int(idx)))
        self.cuts: dict[int, _CutRec] = {
            i: _CutRec(c.direction, c.kind, list(c.nodes)) for i, c in enumerate(d.cuts)
        }
        self.order: list[int] = list(range(len(d.cuts)))
        self.m = d.monotone_point
        self.label = d.label

    def new_key(self) -> int:
        key = max(self.cuts, default=-1) + 1
        self.order.append(key)
        return key

    def drop_cut(self, key: int) -> None:
        del self.cuts[key]
        self.order.remove(key)

    def cleanup(self) -> None:
        """Remove duplicate and straight untagged vertices; tag new corners."""
        changed = True
        while changed:
            changed = False
            n = len(self.pts)
            for i in range(n):
                if n > 3 and self.pts[i] == self.pts[(i + 1) % n]:
                    j = (i + 1) % n
                    if self.tags[j] is None or self.tags[j] == DELZANT:
                        del self.pts[j], self.tags[j]
                    elif self.tags[i] is None or self.tags[i] == DELZANT:
                        del self.pts[i], self.tags[i]
                    else:
                        raise DiagramError("two cut bases collapsed onto one point")
                    changed = True
                    break
            if changed:
                continue
            for i in range(n):
                if self.tags[i] is not None:
                    continue
                a, v, b = self.pts[i - 1], self.pts[i], self.pts[(i + 1) % n]
                ein, eout = primitive(v - a), primitive(b - v)
                if ein == eout:
                    del self.pts[i], self.tags[i]
                    changed = True
                    break
                if wedge(ein, eout) == 1:
                    self.tags[i] = DELZANT
                else:
                    raise DiagramError(f"operation leaves a singular corner at {tuple(v)}")

    def build(self) -> ATBD:
        self.cleanup()
        index = {key: i for i, key in enumerate(self.order)}
        roles = []
        bases: dict[int, list[int]] = {k: [] for k in self.order}
        for vi, tag in enumerate(self.tags):
            if tag == DELZANT:
                roles.append(DELZANT)
            else:
                kind, key = tag
                roles.append(f"{kind}:{index[key]}")
                if kind == "cut":
                    bases[key].append(vi)
        n = len(self.pts)
        cuts = []
        for key in self.order:
            rec = self.cuts[key]
            bs = bases[key]
            if rec.kind is Kind.SEAM:
                apex = next(i for i, t in enumerate(self.tags) if t == ("apex", key))
                base = ((apex - 1) % n, (apex + 1) % n)
            else:
                if len(bs) != 1:
                    raise DiagramError(f"cut {index[key]} lost its base vertex")
                base = (bs[0],)
            cuts.append(Cut(rec.direction, rec.kind, base, tuple(rec.nodes)))
        return ATBD(tuple(self.pts), tuple(roles), tuple(cuts), self.m, self.label)


def _checked(d: ATBD, what: str) -> ATBD:
    rep = validate(d)
    if not rep.ok:
        raise DiagramError(f"{what} produced an invalid diagram: " + "; ".join(rep.violations))
    return d


def _ray_cut(d: ATBD, ci: int) -> Cut:
    if not 0 <= ci < len(d.cuts):
        raise DiagramError(f"no cut {ci}")
    cut = d.cuts[ci]
    if cut.kind is not Kind.RAY:
        raise DiagramError(f"cut {ci} is a seam; transfer it first")
    return cut


# -- trades and slides -------------------------------------------------------

def trade_direction(d: ATBD, vertex: int) -> LatticeVec:
    return primitive(d.e_out(vertex) - d.e_in(vertex))


def default_nodes(d: ATBD, base, direction, count: int) -> tuple[Fraction, ...]:
    """Canonical node parameters: evenly spaced up to the monotone point.

    Without a monotone point on the eigenline the nodes are spread over the
    first half of the chord instead.
    """
    m = d.monotone_point
    if m is not None and wedge(direction, (m[0] - base[0], m[1] - base[1])) == 0:
        tm = _param_along(base, direction, m)
        if tm > 0:
            return tuple(tm * j / (count + 1) for j in range(1, count + 1))
    hit = ray_first_hit(d, base, direction, skip_vertex=None if base not in d.vertices else d.vertices.index(base))
    half = hit.t / 2
    return tuple(half * j / (count + 1) for j in range(1, count + 1))


def _param_along(base, direction, p) -> Fraction:
    if direction[0] != 0:
        return (Fraction(p[0]) - base[0]) / direction[0]
    return (Fraction(p[1]) - base[1]) / direction[1]


def nodal_trade(d: ATBD, vertex: int) -> ATBD:
    """Replace the Delzant corner ``vertex`` by a node on its eigenray."""
    n = len(d)
    vertex %= n
    if d.roles[vertex] != DELZANT:
        return _trade_hidden(d, vertex)
    if wedge(d.e_in(vertex), d.e_out(vertex)) != 1:
        raise DiagramError(f"vertex {vertex} is not a smooth corner")
    w = trade_direction(d, vertex)
    base = d.vertex(vertex)
    m = d.monotone_point
    if m is not None:
        rel = (m[0] - base[0], m[1] - base[1])
        if wedge(w, rel) != 0 or _param_along(base, w, m) <= 0:
            raise DiagramError("eigenline of the traded corner misses the monotone point")
    nodes = default_nodes(d, base, w, 1)
    roles = list(d.roles)
    roles[vertex] = f"cut:{len(d.cuts)}"
    out = replace(d, roles=tuple(roles), cuts=d.cuts + (Cut(w, Kind.RAY, (vertex,), nodes),))
    return _checked(out, "nodal trade")


def hidden_trade_direction(d: ATBD, vertex: int) -> Optional[LatticeVec]:
    """Trade direction of a smooth corner left behind at a cut base, if any."""
    ci = d.cut_at(vertex)
    if ci is None or d.cuts[ci].kind is not Kind.RAY or corner_defect(d, vertex) != 1:
        return None
    cut = d.cuts[ci]
    a = monodromy_matrix(cut.direction, -cut.n)(d.e_in(vertex))
    return primitive(d.e_out(vertex) - a)


def _trade_hidden(d: ATBD, vertex: int) -> ATBD:
    # a smooth corner behind a cut whose eigenray is the cut itself: one more node
    w = hidden_trade_direction(d, vertex)
    if w is None:
        raise DiagramError(f"vertex {vertex} is not a Delzant corner")
    ci = d.cut_at(vertex)
    cut = d.cuts[ci]
    if w != cut.direction:
        raise DiagramError(f"corner behind cut {ci} trades off its eigenray")
    base = d.vertex(vertex)
    cuts = list(d.cuts)
    cuts[ci] = replace(cut, nodes=default_nodes(d, base, w, cut.n + 1))
    return _checked(replace(d, cuts=tuple(cuts)), "nodal trade")


def nodal_slide(d: ATBD, ci: int, positions: Sequence) -> ATBD:
    cut = _ray_cut(d, ci)
    pos = tuple(Fraction(t) for t in positions)
    if len(pos) != cut.n:
        raise DiagramError(f"cut {ci} has {cut.n} nodes, got {len(pos)} positions")
    if any(t <= 0 for t in pos) or any(pos[i] >= pos[i + 1] for i in range(len(pos) - 1)):
        raise DiagramError("node positions must be positive and strictly increasing")
    cuts = list(d.cuts)
    cuts[ci] = replace(cut, nodes=pos)
    return _checked(replace(d, cuts=tuple(cuts)), "nodal slide")


def place_nodes_canonically(d: ATBD, ci: Optional[int] = None) -> ATBD:
    """Move nodes to ``t_m * j / (n + 1)`` wherever the monotone point allows."""
    m = d.monotone_point
    if m is None:
        return d
    cuts = list(d.cuts)
    for i, cut in enumerate(d.cuts):
        if (ci is not None and i != ci) or cut.kind is not Kind.RAY:
            continue
        base = d.vertex(cut.base[0])
        if wedge(cut.direction, (m[0] - base[0], m[1] - base[1])) != 0:
            continue
        tm = _param_along(base, cut.direction, m)
        if tm <= cut.nodes[-1]:
            continue
        cuts[i] = replace(cut, nodes=tuple(tm * j / (cut.n + 1) for j in range(1, cut.n + 1)))
    return replace(d, cuts=tuple(cuts))


# -- transferring the cut ------------------------------------------------------

def _region_contains(chain_pts: list, a, b, p) -> bool:
    return locate(p, [a] + chain_pts + [b]) == "inside"


def _check_chain_side(chain_pts, origin, w, sign: int) -> None:
    for v in chain_pts:
        s = wedge(w, (v[0] - origin[0], v[1] - origin[1]))
        if s * sign <= 0:
            raise DiagramError("eigenline meets the diagram in more than one chord")


def _blocked(d: ATBD, a, b, skip: set[int], allow_endpoint=None) -> None:
    for j, other in enumerate(d.cuts):
        if j in skip or other.kind is not Kind.RAY:
            continue
        c, e = d.cut_segment(j)
        if segments_intersect(a, b, c, e):
            if allow_endpoint is not None and (c == allow_endpoint) and not on_segment(e, a, b):
                continue
            raise DiagramError("cut collision")


def transfer_cut(d: ATBD, ci: int, side=Side.LEFT, count: Optional[int] = None) -> ATBD:
    return transfer_cut_indexed(d, ci, side, count)[0]


def transfer_cut_indexed(d: ATBD, ci: int, side=Side.LEFT, count: Optional[int] = None) -> tuple[ATBD, int]:
    """Transfer the outermost ``count`` nodes of cut ``ci`` to the opposite eigenray.

    Returns the diagram and the index of the cut now carrying those nodes.
    """
    out, idx = _transfer(d, ci, side, count)
    return _checked(out, "transferring the cut"), idx


def _transfer(d: ATBD, ci: int, side, count: Optional[int]) -> tuple[ATBD, int]:
    side = Side.parse(side)
    if not 0 <= ci < len(d.cuts):
        raise DiagramError(f"no cut {ci}")
    if d.cuts[ci].kind is Kind.SEAM:
        return _transfer_seam(d, ci, side)
    cut = d.cuts[ci]
    k = cut.n if count is None else count
    if not 1 <= k <= cut.n:
        raise DiagramError(f"cannot transfer {k} of {cut.n} nodes")
    n = len(d)
    b = cut.base[0]
    B = d.vertex(b)
    w = cut.direction
    hit = ray_first_hit(d, B, w, skip_vertex=b)
    if hit.t <= cut.nodes[-1]:
        raise DiagramError("nodes lie beyond the opposite boundary")
    far = B + w * hit.t
    remaining = cut.nodes[: cut.n - k]
    moved = cut.nodes[cut.n - k:]

    # vertices strictly between b and the hit, in ccw order (right chain)
    if hit.vertex is not None:
        stop = hit.vertex
        right = _cyc(b + 1, stop, n)
        left = _cyc(stop + 1, b, n)
    else:
        right = _cyc(b + 1, hit.edge + 1, n)
        left = _cyc(hit.edge + 1, b, n)
    _check_chain_side([d.vertex(i) for i in right], B, w, -1)
    _check_chain_side([d.vertex(i) for i in left], B, w, +1)

    merge_with = None
    if hit.vertex is not None and d.roles[hit.vertex] != DELZANT:
        j = d.cut_at(hit.vertex)
        other = d.cuts[j] if j is not None else None
        if other is None or other.kind is not Kind.RAY or other.direction != -w:
            raise DiagramError("cut collision")
        merge_with = j
    _blocked(d, B + w * moved[0], far, {ci} | ({merge_with} if merge_with is not None else set()))
    if merge_with is not None:
        tip = d.cut_segment(merge_with)[1]
        if _param_along(B, w, tip) <= moved[-1]:
            raise DiagramError("cut collision")

    bld = _Builder(d)
    if side is Side.RIGHT:
        M = monodromy_matrix(w, k)
        mapped = right
    else:
        M = monodromy_matrix(w, -k)
        mapped = left
    mapped_pts = [d.vertex(i) for i in mapped]
    if bld.m is not None and _region_contains(
        mapped_pts if side is Side.RIGHT else mapped_pts[::-1], B, far, bld.m
    ):
        bld.m = M.about(B, bld.m)
    moved_keys = set()
    for i in mapped:
        bld.pts[i] = M.about(B, bld.pts[i])
        tag = bld.tags[i]
        if tag != DELZANT and tag is not None and tag[1] not in moved_keys:
            moved_keys.add(tag[1])
            rec = bld.cuts[tag[1]]
            rec.direction = M(rec.direction)

    # the cut's own record: remaining nodes stay at b
    key = ci
    new_nodes = sorted(hit.t - t for t in moved)
    if remaining:
        bld.cuts[key].nodes = list(remaining)
        target = None
    else:
        target = key
        bld.tags[b] = None
    if merge_with is not None:
        rec = bld.cuts[merge_with]
        rec.nodes = sorted(rec.nodes + new_nodes)
        if target is not None:
            bld.drop_cut(target)
        out_key = merge_with
    else:
        if target is None:
            target = bld.new_key()
            bld.cuts[target] = _CutRec(-w, Kind.RAY, new_nodes)
        else:
            bld.cuts[target] = _CutRec(-w, Kind.RAY, new_nodes)
        out_key = target
        if hit.vertex is not None:
            bld.tags[hit.vertex] = ("cut", target)
        else:
            pos = hit.edge + 1
            bld.pts.insert(pos, far)
            bld.tags.insert(pos, ("cut", target))
    out = bld.build()
    out_index = bld.order.index(out_key)
    out = place_nodes_canonically(out, out_index) if merge_with is not None else out
    return out, out_index


def _cyc(start: int, stop: int, n: int) -> list[int]:
    """Indices from ``start`` up to but excluding ``stop``, cyclically."""
    out = []
    i = start % n
    stop %= n
    while i != stop:
        out.append(i)
        i = (i + 1) % n
    return out


def _transfer_seam(d: ATBD, ci: int, side: Side) -> tuple[ATBD, int]:
    cut = d.cuts[ci]
    n = len(d)
    s, e = cut.base
    apex = seam_apex(d, ci)
    A = d.vertex(apex)
    u = cut.direction
    ray = u if side is Side.RIGHT else -u
    hit = ray_first_hit(d, A, ray, skip_vertex=apex)
    far = A + ray * hit.t
    _blocked(d, A, far, {ci})
    bld = _Builder(d)
    if side is Side.RIGHT:
        M = monodromy_matrix(u, 1)
        if hit.vertex is not None:
            mapped = _cyc(e + 1, hit.vertex, n)
        else:
            mapped = _cyc(e + 1, hit.edge + 1, n)
        _check_chain_side([d.vertex(i) for i in mapped], A, ray, -1)
    else:
        M = monodromy_matrix(u, -1)
        if hit.vertex is not None:
            mapped = _cyc(hit.vertex + 1, s, n)
        else:
            mapped = _cyc(hit.edge + 1, s, n)
        _check_chain_side([d.vertex(i) for i in mapped], A, ray, +1)
    if hit.vertex is not None and d.roles[hit.vertex] != DELZANT:
        raise DiagramError("cut collision")
    region = [d.vertex(i) for i in ([e] + mapped if side is Side.RIGHT else mapped + [s])]
    if bld.m is not None and locate(bld.m, [A] + region + [far] if side is Side.RIGHT else [far] + region + [A]) == "inside":
        bld.m = M.about(A, bld.m)
    moved_keys = set()
    for i in mapped:
        bld.pts[i] = M.about(A, bld.pts[i])
        tag = bld.tags[i]
        if tag != DELZANT and tag is not None and tag[1] not in moved_keys:
            moved_keys.add(tag[1])
            bld.cuts[tag[1]].direction = M(bld.cuts[tag[1]].direction)
    bld.cuts[ci] = _CutRec(-ray, Kind.RAY, [hit.t])
    # insert the new base before dropping the notch so indices stay valid
    if hit.vertex is not None:
        bld.tags[hit.vertex] = ("cut", ci)
    else:
        pos = hit.edge + 1
        bld.pts.insert(pos, far)
        bld.tags.insert(pos, ("cut", ci))
    # drop apex and the vertex glued onto its partner
    gone = [i for i, t in enumerate(bld.tags) if t == ("apex", ci)]
    ends = [i for i, t in enumerate(bld.tags) if t == ("cut", ci) and bld.pts[i] != far]
    start_pt, end_pt = d.vertex(s), d.vertex(e)
    drop = gone + [i for i in ends if bld.pts[i] == (end_pt if side is Side.RIGHT else start_pt)]
    keep = [i for i in ends if i not in drop]
    for i in keep:
        bld.tags[i] = None
    for i in sorted(drop, reverse=True):
        del bld.pts[i], bld.tags[i]
    out = bld.build()
    out = place_nodes_canonically(out, bld.order.index(ci))
    return out, bld.order.index(ci)


# -- mutation ------------------------------------------------------------------

def mutate(d: ATBD, ci: int, side=Side.LEFT, count: Optional[int] = None) -> ATBD:
    return mutate_indexed(d, ci, side, count)[0]


def mutate_indexed(d: ATBD, ci: int, side=Side.LEFT, count: Optional[int] = None) -> tuple[ATBD, int]:
    """Slide the outermost ``count`` nodes through the monotone point, then transfer."""
    cut = _ray_cut(d, ci)
    m = d.monotone_point
    if m is None:
        raise DiagramError("mutation needs a monotone point")
    if not on_eigenline(d, ci, m):
        raise DiagramError(f"cut {ci} eigenline misses the monotone point")
    k = cut.n if count is None else count
    if not 1 <= k <= cut.n:
        raise DiagramError(f"cannot mutate {k} of {cut.n} nodes")
    B = d.vertex(cut.base[0])
    tm = _param_along(B, cut.direction, m)
    if tm <= cut.nodes[-1]:
        raise DiagramError("monotone point is not beyond the nodes")
    hit = ray_first_hit(d, B, cut.direction, skip_vertex=cut.base[0])
    limit = hit.t
    if hit.vertex is not None and d.cut_at(hit.vertex) is not None:
        # nodes of an opposite cut on the same line: stop short of them
        other = d.cuts[d.cut_at(hit.vertex)]
        if other.kind is Kind.RAY and other.direction == -cut.direction:
            limit = hit.t - other.nodes[-1]
    if limit <= tm:
        raise DiagramError("no room beyond the monotone point")
    stay = cut.n - k
    pos = [tm * j / (stay + 1) for j in range(1, stay + 1)]
    pos += [tm + (limit - tm) * j / (k + 1) for j in range(1, k + 1)]
    # mid-mutation the monotone point sits on the cut, so skip validation here
    cuts = list(d.cuts)
    cuts[ci] = replace(cut, nodes=tuple(pos))
    slid = replace(d, cuts=tuple(cuts))
    out, idx = _transfer(slid, ci, side, k)
    out = place_nodes_canonically(out)
    return _checked(out, "mutation"), idx


def mutate_word(d: ATBD, word: Sequence) -> ATBD:
    """Fold :func:`mutate` over ``(cut, side)`` pairs (bare indices use LEFT)."""
    for step in word:
        if isinstance(step, int):
            d = mutate(d, step)
        else:
            d = mutate(d, *step)
    return d


# -- blowups -------------------------------------------------------------------

def toric_blowup(d: ATBD, vertex: int, length) -> ATBD:
    """Cut the Delzant corner ``vertex`` at affine size ``length``."""
    ell = Fraction(length)
    n = len(d)
    vertex %= n
    if d.roles[vertex] != DELZANT:
        return _trade_hidden(d, vertex)
    if ell <= 0:
        raise DiagramError("blowup size must be positive")
    v = d.vertex(vertex)
    if ell >= affine_length(d.vertex(vertex - 1), v) or ell >= affine_length(v, d.vertex(vertex + 1)):
        raise DiagramError("blowup size exceeds an adjacent edge")
    bld = _Builder(d)
    p1 = v - d.e_in(vertex) * ell
    p2 = v + d.e_out(vertex) * ell
    bld.pts[vertex:vertex + 1] = [p1, p2]
    bld.tags[vertex:vertex + 1] = [DELZANT, DELZANT]
    return _checked(bld.build(), "toric blowup")


def find_edge(d: ATBD, p) -> int:
    for i in range(len(d)):
        a, b = d.edge(i)
        if on_segment(p, a, b) and p != a and p != b:
            return i
    raise DiagramError(f"{tuple(p)} is not interior to an edge")


def almost_toric_blowup(d: ATBD, edge: Optional[int], p, length, side=Side.LEFT, nu=None) -> ATBD:
    """Cut a notch of size ``length`` at ``p`` on an edge, leaving a seam cut.

    With edge direction ``u`` and inward ``nu`` (``wedge(u, nu) = 1``), the
    LEFT notch is ``p - l u -> p + l nu -> p`` and the RIGHT notch is
    ``p -> p + l nu -> p + l u``.
    """
    side = Side.parse(side)
    ell = Fraction(length)
    if ell <= 0:
        raise DiagramError("blowup length must be positive")
    p = point(*p)
    i = find_edge(d, p) if edge is None else edge % len(d)
    a, b = d.edge(i)
    if not on_segment(p, a, b) or p in (a, b):
        raise DiagramError(f"{tuple(p)} is not interior to edge {i}")
    u = d.edge_dir(i)
    nu = normal_through(u) if nu is None else LatticeVec(*nu)
    if wedge(u, nu) != 1:
        raise DiagramError("normal must satisfy wedge(u, nu) = 1")
    if side is Side.LEFT:
        if affine_length(a, p) <= ell:
            raise DiagramError("insufficient room on the edge")
        start, end = p - u * ell, p
    else:
        if affine_length(p, b) <= ell:
            raise DiagramError("insufficient room on the edge")
        start, end = p, p + u * ell
    apex = p + nu * ell
    for j, cut in enumerate(d.cuts):
        if cut.kind is not Kind.RAY:
            continue
        c, e = d.cut_segment(j)
        if segments_intersect(start, apex, c, e) or segments_intersect(apex, end, c, e) or \
                locate(e, [start, end, apex]) != "outside":
            raise DiagramError("notch collides with a cut")
    bld = _Builder(d)
    key = bld.new_key()
    bld.cuts[key] = _CutRec(u, Kind.SEAM, [Fraction(0)])
    bld.pts[i + 1:i + 1] = [start, apex, end]
    bld.tags[i + 1:i + 1] = [("cut", key), ("apex", key), ("cut", key)]
    return _checked(bld.build(), "almost toric blowup")


# -- global maps -----------------------------------------------------------------

def transform(d: ATBD, U: UnimodularMap, shift=(0, 0)) -> ATBD:
    """Apply ``x -> U x + shift`` with ``det U = 1``."""
    if U.det != 1:
        raise DiagramError("only orientation-preserving maps keep the vertex order")
    verts = tuple(U(v) + shift for v in d.vertices)
    cuts = tuple(replace(c, direction=U(c.direction)) for c in d.cuts)
    m = U(d.monotone_point) + shift if d.monotone_point is not None else None
    return replace(d, vertices=verts, cuts=cuts, monotone_point=m)


ROTATE_QUARTER = UnimodularMap(0, -1, 1, 0)


def rescale(d: ATBD, factor) -> ATBD:
    f = Fraction(factor)
    if f <= 0:
        raise DiagramError("scale factor must be positive")
    verts = tuple(v * f for v in d.vertices)
    cuts = tuple(replace(c, nodes=tuple(t * f for t in c.nodes)) if c.kind is Kind.RAY else c for c in d.cuts)
    m = d.monotone_point * f if d.monotone_point is not None else None
    return replace(d, vertices=verts, cuts=cuts, monotone_point=m)
