"""The CP2#1 diagrams indexed by Markov pairs ``(a, b)`` with ``1 + a^2 + b^2 = 3ab``.

Start from the CP2 triangle with two nodal trades, mutate along the Markov
tree from ``(1, 1, 1)`` to ``(1, a, b)``, rescale by ``ab`` so the edge
lengths become ``3, 3a^2, 3b^2`` and blow up the smooth corner by ``ab``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..atbd import ATBD, DELZANT, make_diagram, mutate, rescale, toric_blowup
from ..lattice import affine_length
from ..markov import MarkovEqnII, is_solution, minimize, mutate_triple
from ..orbifold import LimitOrbifold, divisor_self_intersection, limit_orbifold
from .engine import ScriptError, apply_op, monotone_corner_size

CP2 = MarkovEqnII(3, 1, 1, 1)


def markov_pairs(count: int) -> list[tuple[int, int]]:
    """The first ``count`` pairs with ``(1, a, b)`` a Markov triple, ``a <= b``."""
    out = [(1, 1)]
    while len(out) < count:
        a, b = out[-1]
        out.append((b, 3 * b - a) if (a, b) != (1, 1) else (1, 2))
    return out[:count]


def _opposite_length(d: ATBD, ci: int) -> Fraction:
    b = d.cuts[ci].base[0]
    return affine_length(d.vertex(b + 1), d.vertex(b + 2))


def _two_node_cp2() -> ATBD:
    d = make_diagram([(-1, -1), (2, -1), (-1, 2)], monotone_point=(0, 0))
    for w in ((-2, 1), (1, -2)):
        d = apply_op(d, {"op": "trade", "node": list(w)})
    return d


def _mutate_towards(d: ATBD, cur, slot: int) -> tuple[ATBD, tuple]:
    # the perimeter is fixed, so the edge opposite a node has length 9 t^2 / sum(t^2)
    nxt = mutate_triple(CP2, cur, slot)
    unit = Fraction(9, sum(v * v for v in cur))
    nunit = Fraction(9, sum(v * v for v in nxt))
    want = sorted(nunit * v * v for v in nxt[1:])
    for ci in range(len(d.cuts)):
        if _opposite_length(d, ci) != unit * cur[slot - 1] ** 2:
            continue
        e = mutate(d, ci, "left")
        if sorted(_opposite_length(e, cj) for cj in range(len(e.cuts))) == want:
            return e, nxt
    raise ScriptError(f"no cut realizes the mutation of {cur} in slot {slot}")


def family_steps(a: int, b: int) -> list[ATBD]:
    if not is_solution(CP2, (1, a, b)):
        raise ScriptError(f"(1, {a}, {b}) is not a Markov triple")
    first = _two_node_cp2().with_label(f"cp2x1.family[{a},{b}]:1")
    _, word = minimize(CP2, (1, a, b))
    d, cur = first, (1, 1, 1)
    for slot in reversed(word):
        d, cur = _mutate_towards(d, cur, slot)
    if sorted(cur) != sorted((1, a, b)):
        raise ScriptError(f"mutation path ended at {cur}")
    second = d.with_label(f"cp2x1.family[{a},{b}]:2")
    d = rescale(d, a * b)
    corner = d.roles.index(DELZANT)
    third = toric_blowup(d, corner, monotone_corner_size(d, corner)).with_label(f"cp2x1.family[{a},{b}]:3")
    return [first, second, third]


@dataclass(frozen=True)
class FamilyEdges:
    """Edge roles of a family diagram: ``A``, ``B``, ``C`` and the exceptional ``E``."""

    orbifold: LimitOrbifold
    tags: tuple[str, ...]

    def self_intersection(self, tag: str) -> Fraction:
        i = self.tags.index(tag)
        return divisor_self_intersection(self.orbifold, i)

    def normal(self, tag: str):
        return self.orbifold.normals()[self.tags.index(tag)]


def family_edges(d: ATBD, a: int, b: int) -> FamilyEdges:
    o = limit_orbifold(d)
    by_length = {3 * b * b - a * b: "B", 3 * a * a - a * b: "A", 3: "C", a * b: "E"}
    if len(set(by_length)) < 4 and (a, b) != (1, 1):
        raise ScriptError(f"edge lengths do not separate the roles for {(a, b)}")
    tags = []
    for L in o.edge_lengths:
        if L not in by_length:
            raise ScriptError(f"unexpected edge length {L}")
        tags.append(by_length[L])
    if a == b:
        # A and B have equal length and play symmetric roles
        tags[len(tags) - 1 - tags[::-1].index("A")] = "B"
    return FamilyEdges(o, tuple(tags))
