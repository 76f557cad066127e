"""Property tests over generated vectors, triples and mutation words."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from atfkit import _purekernels, kernels
from atfkit.atbd import (
    ROTATE_QUARTER,
    canonicalize,
    dumps,
    is_monotone,
    is_triangular,
    loads,
    mutate_indexed,
    profile,
    rescale,
    transform,
    validate,
)
from atfkit.catalog import build, final_scripts
from atfkit.catalog.engine import LookupFailed
from atfkit.lattice import LatticeVec, UnimodularMap, affine_length, monodromy_matrix, point, primitive, wedge
from atfkit.markov import (
    MarkovEqnI,
    MarkovEqnII,
    classify_type_I,
    is_solution,
    minimal_solutions,
    minimize,
    mutate_triple,
    symmetric_representative,
)
from atfkit.render import render_svg

ints = st.integers(-50, 50)
vecs = st.builds(LatticeVec, ints, ints)
nonzero = vecs.filter(lambda v: v != (0, 0))
slots = st.lists(st.integers(1, 3), max_size=8)
special = st.sampled_from([
    UnimodularMap(1, 0, 0, 1), ROTATE_QUARTER, UnimodularMap(1, 1, 0, 1), UnimodularMap(1, 0, -2, 1),
    UnimodularMap(2, 1, 1, 1),
])
unimodular = st.one_of(special, st.just(UnimodularMap(0, 1, 1, 0)))


@given(vecs, vecs, vecs, ints)
def test_wedge_bilinear_antisymmetric(u, v, w, k):
    assert wedge(u, v) == -wedge(v, u)
    assert wedge(u + v * k, w) == wedge(u, w) + k * wedge(v, w)


@given(nonzero)
def test_primitive_divides(v):
    p = primitive(v)
    assert wedge(p, v) == 0 and (v.x * p.x + v.y * p.y) > 0
    k = v.x // p.x if p.x else v.y // p.y
    assert p * k == v and primitive(p) == p


@given(nonzero, st.integers(-4, 4), st.integers(-4, 4))
def test_monodromy_group_law(v, n, m):
    w = primitive(v)
    M = monodromy_matrix(w, n)
    assert M.det == 1 and M(w) == w
    assert (M @ monodromy_matrix(w, m)) == monodromy_matrix(w, n + m)


@given(unimodular, st.builds(point, ints, ints), st.builds(point, ints, ints))
def test_affine_length_unimodular_invariant(U, p, q):
    assume(p != q)
    assert affine_length(U(p), U(q)) == affine_length(p, q)


EQUATIONS = [MarkovEqnII(3, 1, 1, 1), MarkovEqnII(2, 1, 1, 2)] + classify_type_I()


@given(st.sampled_from(EQUATIONS), slots)
def test_mutation_words_stay_on_the_tree(eq, word):
    t = minimal_solutions(eq)[0]
    for i in word:
        t = mutate_triple(eq, t, i)
        assert is_solution(eq, t)
    m, descent = minimize(eq, t)
    assert not [i for i in (1, 2, 3) if sum(mutate_triple(eq, m, i)) < sum(m)]
    assert symmetric_representative(eq, m) in {symmetric_representative(eq, s) for s in minimal_solutions(eq)}


@given(st.sampled_from(EQUATIONS), st.lists(st.integers(1, 3), min_size=1, max_size=6))
def test_mutation_is_involution(eq, word):
    t = minimal_solutions(eq)[0]
    for i in word:
        t = mutate_triple(eq, t, i)
    for i in word:
        assert mutate_triple(eq, mutate_triple(eq, t, i), i) == t


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 12), st.integers(1, 14))
def test_kernels_agree(c1, c2, c3, s, bound):
    want = _purekernels.ternary_triples(c1, c2, c3, s, bound)
    assert kernels.ternary_triples(c1, c2, c3, s, bound) == want
    assert kernels.has_ternary_triple(c1, c2, c3, s, bound) == bool(want)


FINALS = {sid: build(sid) for sid in final_scripts()}
final_ids = st.sampled_from(sorted(FINALS))
mut_words = st.lists(st.tuples(st.integers(0, 2), st.sampled_from(["left", "right"])), max_size=4)


def _eq_of(sid):
    d = FINALS[sid]
    prof = profile(d)
    from atfkit.orbifold import checked_degree

    return int(checked_degree(d)), prof


@settings(max_examples=60, deadline=None)
@given(final_ids, mut_words)
def test_mutation_invariants(sid, word):
    d = FINALS[sid]
    deg, _ = _eq_of(sid)
    area = d.area()
    for ci, side in word:
        d, _ = mutate_indexed(d, ci, side)
    assert validate(d).ok and is_monotone(d) and is_triangular(d)
    assert d.area() == area
    prof = profile(d)
    pairs = sorted(prof.node_type)
    eq = MarkovEqnI(deg, *(n for n, _ in pairs), strict=False)
    assert is_solution(eq, [p for _, p in pairs])
    # node counts never change under mutation
    assert sorted(prof.ns) == sorted(profile(FINALS[sid]).ns)


@settings(max_examples=40, deadline=None)
@given(final_ids, special, st.integers(-3, 3), st.integers(-3, 3))
def test_canonical_form_is_invariant(sid, U, dx, dy):
    d = FINALS[sid]
    assert canonicalize(transform(d, U, (dx, dy))) == canonicalize(d)


@settings(max_examples=40, deadline=None)
@given(final_ids, st.fractions(min_value=Fraction(1, 7), max_value=7))
def test_profile_scale_invariant(sid, f):
    d = FINALS[sid]
    assert profile(rescale(d, f)).normalized_lengths() == profile(d).normalized_lengths()
    assert is_monotone(rescale(d, f))


@settings(max_examples=40, deadline=None)
@given(final_ids, mut_words)
def test_io_and_render_round_trip(sid, word):
    d = FINALS[sid]
    for ci, side in word[:2]:
        d, _ = mutate_indexed(d, ci, side)
    assert loads(dumps(d)) == d
    assert render_svg(d) == render_svg(loads(dumps(d)))


@given(st.text(max_size=8))
def test_unknown_scripts_are_lookup_errors(name):
    assume(name not in FINALS and name not in ("cp2x1.family",))
    from atfkit.catalog import list_scripts

    assume(name not in list_scripts())
    with pytest.raises(LookupFailed):
        build(name)
