from fractions import Fraction

import pytest

from atfkit.atbd import almost_toric_blowup, make_diagram, mutate, toric_blowup
from atfkit.catalog.family import family_edges, family_steps, markov_pairs
from atfkit.lattice import point
from atfkit.orbifold import (
    OrbifoldError,
    checked_degree,
    corner_affine_angle,
    degree,
    divisor_self_intersection,
    hull_edge_lengths,
    hull_equivalent,
    intersection_matrix,
    limit_orbifold,
    predicted_hull,
    triangle_degree,
)


def test_limit_orbifold_cp2(cp2_three_node):
    o = limit_orbifold(cp2_three_node)
    assert o.corner_orders == (1, 1, 1)
    assert all(divisor_self_intersection(o, i) == 1 for i in range(3))
    assert intersection_matrix(o) == [[1] * 3] * 3
    assert degree(o) == 9


def test_weighted_plane_114(cp2_three_node):
    o = limit_orbifold(mutate(cp2_three_node, 0))
    assert sorted(o.corner_orders) == [1, 1, 4]
    diag = sorted(intersection_matrix(o)[i][i] for i in range(3))
    # the two short edges are the weight-1 divisors H with H.H = 1/4
    assert diag == [Fraction(1, 4), Fraction(1, 4), 4]
    assert degree(o) == 9


def test_limit_orbifold_rejects_seam():
    d = almost_toric_blowup(make_diagram([(-2, -2), (2, -2), (2, 2), (-2, 2)], monotone_point=(0, 0)),
                            None, point(1, -2), 2)
    with pytest.raises(OrbifoldError):
        limit_orbifold(d)


def test_triangle_formula():
    assert triangle_degree([1, 1, 4], [1, 1, 4]) == 9
    with pytest.raises(OrbifoldError):
        triangle_degree([1, 1, 1], [1, 1, 4])


def test_degree_of_blowups(cp2_triangle):
    one = toric_blowup(cp2_triangle, 0, 1)
    assert checked_degree(one) == 8
    assert checked_degree(toric_blowup(one, 2, 1)) == 7


def test_predicted_hull_cp2(cp2_three_node):
    h = predicted_hull(cp2_three_node)
    assert hull_equivalent(h, [(0, 1), (1, 0), (-1, -1)])
    assert hull_edge_lengths(h) == [1, 1, 1]
    assert [corner_affine_angle(h, v) for v in h.vertices] == [3, 3, 3]


def test_predicted_hull_114(cp2_three_node):
    assert sorted(hull_edge_lengths(predicted_hull(mutate(cp2_three_node, 0)))) == [1, 1, 2]


def test_corner_angle_needs_vertex(cp2_three_node):
    with pytest.raises(OrbifoldError):
        corner_affine_angle(predicted_hull(cp2_three_node), (5, 5))


@pytest.mark.parametrize("a, b", list(markov_pairs(5)))
def test_cp2x1_family(a, b):
    d = family_steps(a, b)[-1]
    edges = family_edges(d, a, b)
    assert edges.self_intersection("A") == Fraction(a * a - b * b, b * b)
    assert edges.self_intersection("B") == Fraction(b * b - a * a, a * a)
    assert edges.self_intersection("C") == Fraction(1, a * a * b * b)
    assert edges.self_intersection("E") == -1
    assert checked_degree(d) == 8
    h = predicted_hull(d)
    assert hull_equivalent(h, [(1, 0), (1, 1), (0, 1), (-a * a, -b * b)])
    assert corner_affine_angle(h, edges.normal("A")) == 3 * a - b


def test_family_angles():
    got = {}
    for a, b in [(2, 5), (5, 13), (13, 34)]:
        d = family_steps(a, b)[-1]
        got[(a, b)] = corner_affine_angle(predicted_hull(d), family_edges(d, a, b).normal("A"))
    assert got == {(2, 5): 1, (5, 13): 2, (13, 34): 5}
