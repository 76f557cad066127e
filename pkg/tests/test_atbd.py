from fractions import Fraction

import pytest

from atfkit.atbd import (
    ROTATE_QUARTER,
    Cut,
    DiagramError,
    Kind,
    TriangularSpec,
    almost_toric_blowup,
    build_triangular,
    canonicalize,
    dumps,
    equivalent,
    is_monotone,
    is_triangular,
    loads,
    make_diagram,
    mutate,
    mutate_indexed,
    mutate_word,
    nodal_slide,
    nodal_trade,
    profile,
    toric_blowup,
    transfer_cut,
    transform,
    triangular_for,
    validate,
)
from atfkit.lattice import LatticeVec, point
from atfkit.markov import MarkovEqnII

from conftest import CP2_VERTS

SQUARE = [(-2, -2), (2, -2), (2, 2), (-2, 2)]


def normalized(d):
    return sorted(profile(d).normalized_lengths())


def test_validate_cp2(cp2_triangle, cp2_three_node):
    assert validate(cp2_triangle).ok
    assert validate(cp2_three_node).ok


def test_validate_role_mismatch():
    cut = Cut(LatticeVec(1, 1), Kind.RAY, (0,), (Fraction(1, 2),))
    d = make_diagram(CP2_VERTS, cuts=[cut], monotone_point=(0, 0))
    assert validate(d).violations == ["cut base vertex must have CUT_BASE role (cut 0)"]


def test_validate_never_raises():
    d = make_diagram([(0, 0), (1, 0)])
    assert not validate(d).ok


def test_trade_direction(cp2_triangle):
    d = nodal_trade(cp2_triangle, 0)
    assert d.cuts[0].direction == LatticeVec(1, 1)
    assert d.roles[0] == "cut:0"


def test_three_trades_node_type(cp2_three_node):
    assert profile(cp2_three_node).node_type == ((1, 1), (1, 1), (1, 1))
    assert sorted(c.direction for c in cp2_three_node.cuts) == sorted(
        [LatticeVec(1, 1), LatticeVec(-2, 1), LatticeVec(1, -2)]
    )


def test_trade_rejects_wide_corner():
    d = make_diagram([(0, 0), (4, 1), (0, 1)])
    with pytest.raises(DiagramError):
        nodal_trade(d, 0)


def test_slide_round_trip(cp2_three_node):
    d = nodal_slide(cp2_three_node, 0, [Fraction(3, 4)])
    assert d.vertices == cp2_three_node.vertices
    assert d.cuts[0].nodes == (Fraction(3, 4),)
    assert nodal_slide(d, 0, [Fraction(1, 2)]) == cp2_three_node


def test_slide_to_boundary(cp2_three_node):
    # (-1,-1) + 3/2 (1,1) lies on the opposite edge
    with pytest.raises(DiagramError):
        nodal_slide(cp2_three_node, 0, [Fraction(3, 2)])


def test_transfer_twice_is_equivalent(cp2_triangle):
    d = nodal_trade(cp2_triangle, 0)
    d = d.__class__(d.vertices, d.roles, d.cuts, None, d.label)
    once = transfer_cut(d, 0, "left")
    assert validate(once).ok
    assert once.cuts[0].direction == LatticeVec(-1, -1)
    back = transfer_cut(once, 0, "left")
    assert equivalent(back, d)


def test_transfer_left_right_equivalent(cp2_triangle):
    d = nodal_trade(cp2_triangle, 0)
    d = d.__class__(d.vertices, d.roles, d.cuts, None, d.label)
    assert equivalent(transfer_cut(d, 0, "left"), transfer_cut(d, 0, "right"))


def test_transfer_blocked_by_monotone_point(cp2_triangle):
    with pytest.raises(DiagramError, match="monotone point"):
        transfer_cut(nodal_trade(cp2_triangle, 0), 0)


def test_seam_transfer_straightens_notch():
    d = make_diagram(SQUARE, monotone_point=(0, 0))
    d = almost_toric_blowup(d, None, point(1, -2), 2)
    assert d.cuts[0].kind is Kind.SEAM
    out = transfer_cut(d.__class__(d.vertices, d.roles, d.cuts, None, d.label), 0, "right")
    assert out.cuts[0].kind is Kind.RAY
    assert validate(out).ok and out.area() == d.area()


def test_mutation_length_and_node_type(cp2_three_node):
    for ci in range(3):
        for side in ("left", "right"):
            m = mutate(cp2_three_node, ci, side)
            assert is_triangular(m) and is_monotone(m)
            assert normalized(m) == [1, 1, 4]
            assert sorted(profile(m).node_type) == [(1, 1), (1, 1), (1, 2)]


def test_mutation_involution(cp2_three_node):
    m, ci = mutate_indexed(cp2_three_node, 0, "left")
    assert equivalent(mutate(m, ci, "left"), cp2_three_node)


def test_mutate_word_empty(cp2_three_node):
    assert mutate_word(cp2_three_node, []) == cp2_three_node


def test_mutation_chain_follows_markov_tree(cp2_three_node):
    d = cp2_three_node
    # squares of (1,1,2), (1,2,5), (1,5,13)
    for want in ([1, 1, 4], [1, 4, 25], [1, 25, 169]):
        want = [Fraction(w, want[0]) for w in want]
        hits = [e for e in (mutate(d, ci, "left") for ci in range(3)) if normalized(e) == want]
        assert hits
        d = hits[0]


def test_toric_blowup(cp2_triangle):
    assert is_monotone(toric_blowup(cp2_triangle, 0, 1))
    off = toric_blowup(cp2_triangle, 0, Fraction(3, 2))
    assert validate(off).ok and not is_monotone(off)


def test_toric_blowup_through_monotone_point(cp2_triangle):
    # size 2 puts the new edge through the origin
    with pytest.raises(DiagramError, match="not interior"):
        toric_blowup(cp2_triangle, 0, 2)


def test_almost_toric_blowup_notch():
    d = make_diagram([(0, 0), (6, 0), (6, 6), (0, 6)])
    out = almost_toric_blowup(d, 0, point(3, 0), 1)
    assert out.vertices[1:4] == (point(2, 0), point(3, 1), point(3, 0))
    assert out.cuts[0].direction == LatticeVec(1, 0)
    assert out.node_points(0) == [point(3, 1)]


def test_almost_toric_blowup_monotonicity():
    d = make_diagram(SQUARE, monotone_point=(0, 0))
    assert is_monotone(almost_toric_blowup(d, None, point(1, -2), 2))
    three = almost_toric_blowup(d, None, point("3/2", -2), 3)
    assert validate(three).ok and not is_monotone(three)


def test_area_drops_by_half_square():
    d = make_diagram(SQUARE, monotone_point=(0, 0))
    for ell in (Fraction(1, 2), 1, 2):
        assert d.area() - almost_toric_blowup(d, None, point(1, -2), ell).area() == Fraction(ell) ** 2 / 2
        assert d.area() - toric_blowup(d, 0, ell).area() == Fraction(ell) ** 2 / 2


def test_profile_cp2(cp2_three_node):
    prof = profile(cp2_three_node)
    assert prof.normalized_lengths() == (1, 1, 1)
    assert prof.lam * min(prof.length_type) == 1


def test_profile_rejects_seam():
    d = almost_toric_blowup(make_diagram(SQUARE, monotone_point=(0, 0)), None, point(1, -2), 2)
    with pytest.raises(DiagramError):
        profile(d)


def test_is_monotone(cp2_triangle):
    assert is_monotone(cp2_triangle)
    assert not is_monotone(make_diagram(CP2_VERTS, monotone_point=("1/2", 0)))


def test_canonicalize(cp2_three_node):
    rotated = transform(cp2_three_node, ROTATE_QUARTER, (5, -3))
    assert equivalent(rotated, cp2_three_node)
    assert canonicalize(rotated) == canonicalize(cp2_three_node)
    assert not equivalent(mutate(cp2_three_node, 0), cp2_three_node)


def test_build_triangular_cp2(cp2_three_node):
    d = build_triangular(TriangularSpec(MarkovEqnII(3, 1, 1, 1), (1, 1, 1), (1, 1, 1), -1, 2, Fraction(3)))
    assert is_monotone(d) and equivalent(d, cp2_three_node)


def test_build_triangular_rejects_bad_integers():
    with pytest.raises(DiagramError):
        build_triangular(TriangularSpec(MarkovEqnII(3, 1, 1, 1), (1, 1, 1), (1, 1, 1), 0, 0))


def test_triangular_for_pxp():
    d = triangular_for(MarkovEqnII(2, 1, 1, 2), (1, 1, 1), (1, 1, 2))
    assert is_monotone(d) and normalized(d) == [1, 1, 2]


def test_io_round_trip(cp2_three_node):
    text = dumps(cp2_three_node)
    assert loads(text) == cp2_three_node
    assert dumps(loads(text)) == text


def test_io_rejects_garbage():
    with pytest.raises(DiagramError):
        loads("{not json")
    with pytest.raises(DiagramError):
        loads('{"vertices": [[1]]}')
