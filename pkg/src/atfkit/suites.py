"""Named property suites over the catalog, run by ``atfkit verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from .atbd import (
    ATBD,
    DELZANT,
    DiagramError,
    Kind,
    almost_toric_blowup,
    dumps,
    is_monotone,
    is_triangular,
    loads,
    monotone_distance,
    mutate_indexed,
    nodal_slide,
    profile,
    rescale,
    toric_blowup,
    transfer_cut,
)
from .catalog import build, final_scripts, get_script, list_scripts, steps
from .catalog.engine import apply_op, monotone_corner_size
from .catalog.family import family_edges, family_steps, markov_pairs
from .lattice import LatticeVec, point, wedge
from .markov import (
    MarkovEqnI,
    MarkovEqnII,
    MarkovError,
    brute_force_solutions,
    classify_type_I,
    decreasing_indices,
    derive_type_I_data,
    is_solution,
    minimize,
    mutate_triple,
    symmetric_representative,
    type_II_for,
)
from .orbifold import checked_degree, corner_affine_angle, hull_edge_lengths, predicted_hull
from .render import RenderOptions, render_svg

MAX_DEPTH = 16
DEFAULT_SEED = 20240601
EXPECTED_COUNTS = {9: 1, 8: 1, 7: 0, 6: 1, 5: 1, 4: 1, 3: 2, 2: 2, 1: 2}
CP2_TRIPLES_40 = {(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29), (1, 13, 34)}


class SuiteError(ValueError):
    """Unknown suite or parameters out of range."""


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    depth: int = 8
    seed: int = DEFAULT_SEED
    ids: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.depth > MAX_DEPTH:
            raise SuiteError(f"depth guard: depth {self.depth} exceeds {MAX_DEPTH}")
        if self.depth < 1:
            raise SuiteError("depth must be positive")


@dataclass
class SuiteReport:
    name: str
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def count(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def check(self, ok: bool, what: str) -> bool:
        self.count("checks")
        if not ok:
            self.failures.append(what)
        return ok

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def lines(self) -> list[str]:
        out = [f"suite {self.name}: {'pass' if self.ok else 'FAIL'}"]
        out += [f"  {k}: {v}" for k, v in sorted(self.counts.items())]
        out += [f"  {n}" for n in self.notes]
        if self.failures:
            out.append(f"  failures: {len(self.failures)}")
            out.append(f"  first counterexample: {self.failures[0]}")
        return out


# -- diagram sources -------------------------------------------------------------

def triangular_finals(ids=None) -> dict[str, ATBD]:
    chosen = final_scripts() if ids is None else [i for i in ids if i in final_scripts()]
    return {sid: build(sid) for sid in chosen}


def expected_degree(sid: str) -> int:
    return get_script(sid).expected_degree


def ray_diagrams(ids=None) -> list[tuple[str, ATBD]]:
    """Every catalog step and final without seams, tagged with its script."""
    out = []
    for sid in list_scripts() if ids is None else ids:
        s = get_script(sid)
        if not s.verify or s.family is not None:
            continue
        ds = list(steps(sid)) + ([build(sid)] if s.final is not None else [])
        out += [(sid, d) for d in ds if all(c.kind is Kind.RAY for c in d.cuts)]
    return out


# -- slot tracking for mutation words ------------------------------------------------

@dataclass(frozen=True)
class Tracked:
    """A triangular diagram with the cut of each equation slot and both triples."""

    d: ATBD
    slots: tuple[int, int, int]
    eq1: MarkovEqnI
    ps: tuple[int, int, int]
    eq2: MarkovEqnII
    abc: tuple[int, int, int]


def track(d: ATBD) -> Tracked:
    prof = profile(d)
    deg = checked_degree(d)
    eq1 = MarkovEqnI(int(deg), *prof.ns, strict=False)
    eq2, abc = type_II_for(eq1, prof.ps)
    return Tracked(d, (0, 1, 2), eq1, prof.ps, eq2, abc)


def _slot_side(seed: int, word: tuple) -> str:
    return random.Random(f"{seed}:{word}").choice(("left", "right"))


def mutate_tracked(t: Tracked, slot: int, side: str) -> tuple[Tracked, list[str]]:
    """Mutate the cut in ``slot`` (1-based) and compare with both Vieta jumps."""
    e, idx = mutate_indexed(t.d, t.slots[slot - 1], side)
    ps = mutate_triple(t.eq1, t.ps, slot)
    abc = mutate_triple(t.eq2, t.abc, slot)
    problems = []
    if not is_triangular(e):
        return t, ["mutation left the triangular shape"]
    prof = profile(e)
    want = {j: (t.eq1.coeffs[j], ps[j]) for j in range(3)}
    slots = [None, None, None]
    slots[slot - 1] = idx
    free = [c for c in range(3) if c != idx]
    for j in range(3):
        if j == slot - 1:
            continue
        match = [c for c in free if prof.node_type[c] == want[j]]
        if not match:
            problems.append(f"slot {j + 1}: no cut with node type {want[j]}")
            continue
        slots[j] = match[0]
        free.remove(match[0])
    if problems:
        return t, problems
    if prof.node_type[idx] != want[slot - 1]:
        problems.append(f"mutated cut has node type {prof.node_type[idx]}, expected {want[slot - 1]}")
    ratios = {prof.length_type[slots[j]] / (t.eq2.coeffs[j] * abc[j] ** 2) for j in range(3)}
    if len(ratios) != 1:
        problems.append(f"length type {prof.length_type} not proportional to {t.eq2} at {abc}")
    return Tracked(e, tuple(slots), t.eq1, ps, t.eq2, abc), problems


class WordCache:
    """Mutation words from one start, memoized by prefix."""

    def __init__(self, start: Tracked, seed: int):
        self.seed = seed
        self.states: dict[tuple, Tracked] = {(): start}
        self.problems: dict[tuple, list[str]] = {}

    def get(self, word: tuple) -> Optional[Tracked]:
        if word in self.states:
            return self.states[word]
        parent = self.get(word[:-1])
        if parent is None:
            return None
        try:
            nxt, problems = mutate_tracked(parent, word[-1], _slot_side(self.seed, word))
        except (DiagramError, MarkovError) as exc:
            nxt, problems = None, [str(exc)]
        if problems:
            self.problems[word] = problems
            self.states[word] = None
            return None
        self.states[word] = nxt
        return nxt


def _words(depth: int):
    for k in range(1, depth + 1):
        yield from product((1, 2, 3), repeat=k)


def _random_words(rng: random.Random, count: int, depth: int):
    for _ in range(count):
        yield tuple(rng.choice((1, 2, 3)) for _ in range(rng.randint(1, depth)))


def descendants(sid: str, d: ATBD, depth: int, seed: int) -> list[ATBD]:
    cache = WordCache(track(d), seed)
    return [s.d for w in _words(depth) if (s := cache.get(w)) is not None]


# -- suites ----------------------------------------------------------------------

def suite_classification(spec: SuiteSpec, rep: SuiteReport) -> None:
    eqs = classify_type_I()
    counts = {d: 0 for d in range(1, 10)}
    for e in eqs:
        counts[e.d] += 1
        rep.check(e.n1 + e.n2 + e.n3 + e.d == 12, f"{e}: sum is not 12")
    rep.counts["equations"] = len(eqs)
    rep.check(counts == EXPECTED_COUNTS, f"per-degree counts {counts}")
    rep.check(counts[7] == 0, "an equation of degree 7 exists")
    rep.notes.append("equations: " + " ".join(str(e) for e in eqs))


def suite_markov_tree(spec: SuiteSpec, rep: SuiteReport) -> None:
    eq = MarkovEqnII(3, 1, 1, 1)
    sols = brute_force_solutions(eq, 40)
    # read as a bound on each component: (1,13,34) sums to 48
    reps = {symmetric_representative(eq, t) for t in sols}
    rep.check(reps == CP2_TRIPLES_40, f"triples with entries <= 40: {sorted(reps)}")
    for t in sols:
        m, word = minimize(eq, t)
        rep.count("descents")
        rep.check(m == (1, 1, 1), f"{t} descends to {m}")
        cur = t
        for slot in word:
            if cur != (1, 1, 1):
                rep.check(len(decreasing_indices(eq, cur)) == 1, f"{cur}: not exactly one decreasing mutation")
            cur = mutate_triple(eq, cur, slot)


def suite_mutation_correspondence(spec: SuiteSpec, rep: SuiteReport) -> None:
    rng = random.Random(spec.seed)
    exhaustive = min(5, spec.depth)
    for sid, d in triangular_finals(spec.ids).items():
        cache = WordCache(track(d), spec.seed)
        words = list(_words(exhaustive)) + list(_random_words(rng, 200, spec.depth))
        for w in words:
            rep.count("words")
            cache.get(w)
        rep.count("mutations", len(cache.states) - 1)
        for w, problems in sorted(cache.problems.items()):
            rep.check(False, f"{sid} word {''.join(map(str, w))}: {problems[0]}")
        rep.count("checks", len(cache.states) - 1 - len(cache.problems))
    rep.notes.append(f"seed {spec.seed}, exhaustive depth {exhaustive}, random depth {spec.depth}")


def _random_op(d: ATBD, rng: random.Random) -> tuple[str, ATBD]:
    rays = [ci for ci, c in enumerate(d.cuts) if c.kind is Kind.RAY]
    if not rays:
        raise DiagramError("no ray cuts")
    ci = rng.choice(rays)
    cut = d.cuts[ci]
    side = rng.choice(("left", "right"))
    kind = rng.choice(("mutate", "transfer", "slide"))
    if kind == "mutate":
        return kind, mutate_indexed(d, ci, side, rng.randint(1, cut.n))[0]
    if kind == "transfer":
        # m lies on every cut of a monotone diagram, so transfer without it
        return kind, transfer_cut(replace(d, monotone_point=None), ci, side, rng.randint(1, cut.n))
    f = Fraction(rng.randint(1, 7), 8)
    return kind, nodal_slide(d, ci, [t * f for t in cut.nodes])


def _random_walks(spec: SuiteSpec, rep: SuiteReport, words: int, length: int, check: Callable) -> None:
    rng = random.Random(spec.seed)
    pool = ray_diagrams(spec.ids)
    for _ in range(words):
        sid, d = pool[rng.randrange(len(pool))]
        rep.count("words")
        for _ in range(rng.randint(1, length)):
            try:
                kind, e = _random_op(d, rng)
            except DiagramError:
                rep.count("ops skipped (precondition)")
                continue
            rep.count(f"ops {kind}")
            check(sid, d, kind, e)
            d = e


def suite_degree_invariance(spec: SuiteSpec, rep: SuiteReport) -> None:
    seen: dict[str, set] = {}
    for sid, d in triangular_finals(spec.ids).items():
        deg = checked_degree(d)
        seen.setdefault(get_script(sid).surface, set()).add(deg)
        rep.check(deg == expected_degree(sid), f"{sid}: degree {deg}, expected {expected_degree(sid)}")
        for e in descendants(sid, d, min(3, spec.depth), spec.seed):
            rep.count("descendants")
            rep.check(checked_degree(e) == deg, f"{sid}: mutation descendant has degree {checked_degree(e)}")

    def check(sid, d, kind, e):
        want = expected_degree(sid)
        got = checked_degree(e)
        seen.setdefault(get_script(sid).surface, set()).add(got)
        rep.check(got == want, f"{sid} after {kind}: degree {got}, expected {want}")

    _random_walks(spec, rep, 1000, min(3, spec.depth), check)
    rep.notes.append("degrees: " + ", ".join(f"{k}: {sorted(map(int, v))}" for k, v in sorted(seen.items())))


def type_I_checks(d: ATBD, what: str, rep: SuiteReport) -> None:
    prof = profile(d)
    deg = checked_degree(d)
    eq1 = MarkovEqnI(int(deg), *prof.ns, strict=False)
    rep.check(is_solution(eq1, prof.ps), f"{what}: {prof.ps} does not solve {eq1}")
    lams = {Fraction(n * p * p) / L for (n, p), L in zip(prof.node_type, prof.length_type)}
    rep.check(len(lams) == 1, f"{what}: lambda ratios {lams}")
    eq2, abc = type_II_for(eq1, prof.ps)
    lam, dd, pqr = derive_type_I_data(eq2, abc, prof.ns, prof.ps)
    rep.check(dd == deg, f"{what}: K^2 k1k2k3/lambda = {dd}, degree {deg}")


def suite_type_I(spec: SuiteSpec, rep: SuiteReport) -> None:
    for sid, d in triangular_finals(spec.ids).items():
        type_I_checks(d, sid, rep)
        for e in descendants(sid, d, min(3, spec.depth), spec.seed):
            rep.count("descendants")
            type_I_checks(e, f"{sid} descendant", rep)


def _fan_relation(d: ATBD) -> bool:
    """For a CP2 triangle: the normals satisfy ``sum p_i^2 v_i = 0`` slot by slot."""
    prof = profile(d)
    normals = [LatticeVec(-u.y, u.x) for u in (d.edge_dir(c.base[0] + 1) for c in d.cuts)]
    sx = sum(p * p * v.x for p, v in zip(prof.ps, normals))
    sy = sum(p * p * v.y for p, v in zip(prof.ps, normals))
    hull = predicted_hull(d)
    return sx == 0 and sy == 0 and sorted(hull.vertices) == sorted(normals)


def suite_hull(spec: SuiteSpec, rep: SuiteReport) -> None:
    for sid, d in triangular_finals(spec.ids).items():
        for e in [d] + descendants(sid, d, min(3, spec.depth), spec.seed):
            rep.count("diagrams")
            prof = profile(e)
            want = sorted(n * p for n, p in prof.node_type)
            got = sorted(hull_edge_lengths(predicted_hull(e)))
            rep.check(got == want, f"{sid}: hull edges {got}, expected {want}")
            if get_script(sid).surface == "CP2":
                rep.count("CP2 fans")
                rep.check(_fan_relation(e), f"{sid}: hull is not the fan of CP(a^2,b^2,c^2) for {prof.ps}")


def suite_family(spec: SuiteSpec, rep: SuiteReport) -> None:
    angles = []
    for a, b in markov_pairs(6):
        d = family_steps(a, b)[-1]
        edges = family_edges(d, a, b)
        rep.count("pairs")
        rep.check(is_monotone(d), f"{(a, b)} not monotone")
        rep.check(checked_degree(d) == 8, f"{(a, b)}: degree {checked_degree(d)}")
        want = {
            "A": Fraction(a * a - b * b, b * b),
            "B": Fraction(b * b - a * a, a * a),
            "C": Fraction(1, a * a * b * b),
            "E": Fraction(-1),
        }
        for tag, v in want.items():
            got = edges.self_intersection(tag)
            rep.check(got == v, f"{(a, b)}: {tag}.{tag} = {got}, expected {v}")
        angle = corner_affine_angle(predicted_hull(d), edges.normal("A"))
        rep.check(angle == 3 * a - b, f"{(a, b)}: hull angle {angle}, expected {3 * a - b}")
        angles.append(angle)
    spread = [3 * a - b for a, b in markov_pairs(8)]
    rep.check(len(set(spread)) >= 4, f"angles {spread}")
    rep.notes.append(f"angles {angles}; first eight pairs give 3a-b = {spread}")


def _blowup_steps(ids=None):
    """(script, step, op, diagram before the op) for every blowup in the catalog."""
    for sid in list_scripts() if ids is None else ids:
        s = get_script(sid)
        if not s.verify or s.family is not None:
            continue
        ds = steps(sid)
        for k, st in enumerate(s.steps):
            for j, op in enumerate(st.ops):
                if op["op"] in ("blowup", "atblowup"):
                    if j:
                        raise SuiteError(f"{sid} {st.name}: blowup must open its step")
                    before = ds[k - 1] if k else _source(s)
                    yield sid, st.name, op, before


def _source(s):
    sid, step = s.source.split("@")
    return build(sid, step, closed=False)


def _blowup(d: ATBD, op: dict, factor: int, length: Fraction) -> ATBD:
    """The step's blowup on ``d`` scaled by ``factor``, with an explicit length."""
    d = rescale(d, factor)
    if op["op"] == "blowup":
        c = op["corner"]
        return toric_blowup(d, d.vertices.index(point(Fraction(c[0]) * factor, Fraction(c[1]) * factor)), length)
    if "slide" in op:
        f = Fraction(op["slide"])
        for ci, c in enumerate(d.cuts):
            if c.kind is Kind.RAY:
                d = nodal_slide(d, ci, [t * f for t in c.nodes])
    p = point(Fraction(op["point"][0]) * factor, Fraction(op["point"][1]) * factor)
    return almost_toric_blowup(d, None, p, length, op.get("side", "left"), op.get("normal"))


def suite_conservation(spec: SuiteSpec, rep: SuiteReport) -> None:
    def check(sid, d, kind, e):
        rep.check(e.area() == d.area(), f"{sid} {kind}: area {d.area()} -> {e.area()}")

    _random_walks(spec, rep, 300, min(3, spec.depth), check)
    for sid, name, op, before in _blowup_steps(spec.ids):
        for factor in (1, 2, 6):
            base = rescale(before, factor)
            delta = monotone_distance(base)
            if op["op"] == "blowup":
                c = op["corner"]
                v = base.vertices.index(point(Fraction(c[0]) * factor, Fraction(c[1]) * factor))
                rep.check(monotone_corner_size(base, v) == delta, f"{sid} {name}: corner size is not the distance")
            for ell in (delta / 2, delta, delta * 3 / 2):
                try:
                    out = _blowup(before, op, factor, ell)
                except DiagramError:
                    rep.count("blowups out of room")
                    continue
                rep.count(f"{op['op']}s")
                rep.check(base.area() - out.area() == ell * ell / 2,
                          f"{sid} {name} x{factor}: area drop {base.area() - out.area()}, expected {ell * ell / 2}")
                rep.check(is_monotone(out) == (ell == delta),
                          f"{sid} {name} x{factor}, length {ell}: monotone {is_monotone(out)} with distance {delta}")
    rep.notes.append("blowup lengths checked at grid factors 1, 2 and 6")


def suite_reproducibility(spec: SuiteSpec, rep: SuiteReport) -> None:
    from .catalog import verify_catalog

    for c in verify_catalog().checks:
        if c.name in ("golden", "golden-svg"):
            rep.count(f"{c.name} records")
            rep.check(c.ok, f"{c.script}: {c.detail}")
    for sid, d in ray_diagrams(spec.ids):
        rep.count("round trips")
        rep.check(loads(dumps(d)) == d, f"{sid}: read(write(d)) differs")
        s1 = render_svg(d, RenderOptions(show_grid=True, show_labels=True))
        rep.check(s1 == render_svg(d, RenderOptions(show_grid=True, show_labels=True)), f"{sid}: SVG not stable")


def suite_catalog(spec: SuiteSpec, rep: SuiteReport) -> None:
    from .catalog import verify_catalog

    r = verify_catalog()
    for c in r.checks:
        rep.check(c.ok, f"{c.script} {c.name}: {c.detail}")


SUITES: dict[str, Callable[[SuiteSpec, SuiteReport], None]] = {
    "classification": suite_classification,
    "markov-tree": suite_markov_tree,
    "mutation-correspondence": suite_mutation_correspondence,
    "degree-invariance": suite_degree_invariance,
    "type-I": suite_type_I,
    "hull": suite_hull,
    "cp2x1-family": suite_family,
    "conservation": suite_conservation,
    "reproducibility": suite_reproducibility,
    "catalog": suite_catalog,
}


def run_suite(spec: SuiteSpec) -> SuiteReport:
    if spec.name not in SUITES:
        raise SuiteError(f"unknown suite {spec.name!r}; known: {', '.join(SUITES)}")
    rep = SuiteReport(spec.name)
    SUITES[spec.name](spec, rep)
    return rep
