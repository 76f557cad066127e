"""Markov type I and type II equations.

Both families have the shape ``c1 x^2 + c2 y^2 + c3 z^2 = S x y z``:

* type II ``(K; k1, k2, k3)``: coefficients ``k_i`` and ``S = K k1 k2 k3``;
* type I ``(d; n1, n2, n3)``: coefficients ``n_i`` and ``S = sqrt(d n1 n2 n3)``.

Solutions are positive integer triples, ordered by slot.  A mutation at
slot ``i`` is the Vieta jump to the other root of the quadratic in that
slot, ``x_i' = S x_j x_k / c_i - x_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

from . import kernels

Triple = tuple[int, int, int]

SEED_BOUND = 64


class MarkovError(ValueError):
    pass


@dataclass(frozen=True)
class _Ternary:
    @property
    def coeffs(self) -> Triple:
        raise NotImplementedError

    @property
    def rhs(self) -> int:
        raise NotImplementedError

    strict = True

    def jump_factor(self, index: int) -> Union[int, Fraction]:
        """``S x_j x_k / c_i`` divided by ``x_j x_k``.

        Integral for type II and for type I under the divisibility constraints;
        a non-strict type I equation may have a rational factor.
        """
        c = self.coeffs[index - 1]
        q, r = divmod(self.rhs, c)
        if r:
            if self.strict:
                raise MarkovError(f"{self} has non-integral mutation factor at slot {index}")
            return Fraction(self.rhs, c)
        return q

    def symmetry_classes(self) -> list[list[int]]:
        """Slots (0-based) grouped by equal coefficient."""
        groups: dict[int, list[int]] = {}
        for i, c in enumerate(self.coeffs):
            groups.setdefault(c, []).append(i)
        return sorted(groups.values())


@dataclass(frozen=True)
class MarkovEqnII(_Ternary):
    K: int
    k1: int
    k2: int
    k3: int

    def __post_init__(self):
        if min(self.K, self.k1, self.k2, self.k3) <= 0:
            raise MarkovError("type II constants must be positive")

    @property
    def coeffs(self) -> Triple:
        return (self.k1, self.k2, self.k3)

    @property
    def rhs(self) -> int:
        return self.K * self.k1 * self.k2 * self.k3

    def __str__(self):
        return f"II:{self.K},{self.k1},{self.k2},{self.k3}"


@dataclass(frozen=True)
class MarkovEqnI(_Ternary):
    d: int
    n1: int
    n2: int
    n3: int
    # strict=False keeps only positivity and the square condition
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        problems = type_I_constraint_violations(self.d, self.n1, self.n2, self.n3)
        if not self.strict:
            problems = [p for p in problems if "divisible" not in p]
        if problems:
            raise MarkovError(f"I:{self.d},{self.n1},{self.n2},{self.n3}: " + "; ".join(problems))

    @property
    def coeffs(self) -> Triple:
        return (self.n1, self.n2, self.n3)

    @property
    def rhs(self) -> int:
        return isqrt(self.d * self.n1 * self.n2 * self.n3)

    def __str__(self):
        return f"I:{self.d},{self.n1},{self.n2},{self.n3}"


MarkovEqn = Union[MarkovEqnI, MarkovEqnII]


def type_I_constraint_violations(d: int, n1: int, n2: int, n3: int) -> list[str]:
    out = []
    if min(d, n1, n2, n3) <= 0:
        out.append("constants must be positive")
        return out
    prod = d * n1 * n2 * n3
    if isqrt(prod) ** 2 != prod:
        out.append("d*n1*n2*n3 is not a square")
    n = (n1, n2, n3)
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        if (d * n[i] * n[j]) % n[k]:
            out.append(f"d*n{i + 1}*n{j + 1} not divisible by n{k + 1}")
    return out


def parse_equation(text: str) -> MarkovEqn:
    """Parse ``II:K,k1,k2,k3`` or ``I:d,n1,n2,n3``."""
    try:
        kind, rest = text.strip().split(":", 1)
        vals = [int(v) for v in rest.split(",")]
    except ValueError as exc:
        raise MarkovError(f"cannot parse equation {text!r}") from exc
    if len(vals) != 4:
        raise MarkovError(f"equation {text!r} needs four constants")
    if kind.upper() == "II":
        return MarkovEqnII(*vals)
    if kind.upper() == "I":
        return MarkovEqnI(*vals)
    raise MarkovError(f"unknown equation kind {kind!r}")


def parse_triple(text: str) -> Triple:
    vals = tuple(int(v) for v in text.split(","))
    if len(vals) != 3:
        raise MarkovError(f"triple {text!r} needs three entries")
    return vals  # type: ignore[return-value]


def format_triple(t: Sequence[int]) -> str:
    return ",".join(str(v) for v in t)


def is_solution(eq: MarkovEqn, t: Sequence[int]) -> bool:
    if len(t) != 3 or min(t) <= 0:
        return False
    c1, c2, c3 = eq.coeffs
    x, y, z = t
    return c1 * x * x + c2 * y * y + c3 * z * z == eq.rhs * x * y * z


def mutate_triple(eq: MarkovEqn, t: Sequence[int], index: int) -> Triple:
    """Vieta jump of ``t`` at slot ``index`` (1, 2 or 3)."""
    if index not in (1, 2, 3):
        raise MarkovError(f"slot index must be 1, 2 or 3, got {index}")
    i = index - 1
    others = [t[j] for j in range(3) if j != i]
    new = eq.jump_factor(index) * others[0] * others[1] - t[i]
    if isinstance(new, Fraction):
        if new.denominator != 1:
            raise MarkovError(f"mutation of {tuple(t)} at slot {index} is not integral")
        new = new.numerator
    if new <= 0:
        raise MarkovError(f"mutation of {tuple(t)} at slot {index} is not positive; not a solution?")
    out = list(t)
    out[i] = new
    return tuple(out)  # type: ignore[return-value]


def mutate_word(eq: MarkovEqn, t: Sequence[int], word: Iterable[int]) -> Triple:
    out = tuple(t)
    for index in word:
        out = mutate_triple(eq, out, index)
    return out  # type: ignore[return-value]


def decreasing_indices(eq: MarkovEqn, t: Sequence[int]) -> list[int]:
    return [i for i in (1, 2, 3) if sum(mutate_triple(eq, t, i)) < sum(t)]


def minimize(eq: MarkovEqn, t: Sequence[int]) -> tuple[Triple, list[int]]:
    """Greedy descent to a minimum; returns the minimum and the slots used."""
    if not is_solution(eq, t):
        raise MarkovError(f"{tuple(t)} does not solve {eq}")
    cur = tuple(t)
    word: list[int] = []
    while True:
        down = decreasing_indices(eq, cur)
        if not down:
            return cur, word  # type: ignore[return-value]
        cur = mutate_triple(eq, cur, down[0])
        word.append(down[0])


def symmetric_representative(eq: MarkovEqn, t: Sequence[int]) -> Triple:
    """Sort entries inside groups of slots sharing a coefficient."""
    out = list(t)
    for group in eq.symmetry_classes():
        vals = sorted(out[i] for i in group)
        for i, v in zip(group, vals):
            out[i] = v
    return tuple(out)  # type: ignore[return-value]


def brute_force_solutions(eq: MarkovEqn, bound: int) -> list[Triple]:
    """Every solution with all entries at most ``bound`` (exhaustive box search)."""
    c1, c2, c3 = eq.coeffs
    return kernels.ternary_triples(c1, c2, c3, eq.rhs, bound)


def minimal_solutions(eq: MarkovEqn, bound: int = SEED_BOUND) -> list[Triple]:
    """Solutions in the search box from which no mutation lowers the sum."""
    sols = brute_force_solutions(eq, bound)
    return sorted({t for t in sols if not decreasing_indices(eq, t)})


def enumerate_tree(eq: MarkovEqn, bound: int, seed_bound: int = SEED_BOUND) -> set[Triple]:
    """All solutions with largest entry at most ``bound``, found by mutating from the minima.

    Results are reduced modulo permutations of equal-coefficient slots.
    """
    seeds = minimal_solutions(eq, seed_bound)
    if not seeds:
        raise MarkovError(f"no solution of {eq} with entries <= {seed_bound}")
    seen: set[Triple] = set()
    stack = [s for s in seeds if max(s) <= bound]
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        for i in (1, 2, 3):
            nt = mutate_triple(eq, t, i)
            if max(nt) <= bound and nt not in seen:
                stack.append(nt)
    return {symmetric_representative(eq, t) for t in seen}


def random_word(rng: random.Random, length: int) -> list[int]:
    """Random mutation word without immediate repeats (which would cancel)."""
    word: list[int] = []
    for _ in range(length):
        choices = [i for i in (1, 2, 3) if not word or word[-1] != i]
        word.append(rng.choice(choices))
    return word


def classify_type_I(seed_bound: int = SEED_BOUND, total: int = 12, strict: bool = True) -> list[MarkovEqnI]:
    """Type I equations with ``n1 <= n2 <= n3``, ``n1 + n2 + n3 + d = total`` and a solution.

    Solvability is decided by exhaustive search with entries up to
    ``seed_bound``; each hit is checked to descend to a minimum inside the box.
    ``strict=False`` drops the divisibility constraints.
    """
    found = []
    for d in range(1, total - 2):
        rest = total - d
        for n1 in range(1, rest + 1):
            for n2 in range(n1, rest - n1 + 1):
                n3 = rest - n1 - n2
                if n3 < n2:
                    continue
                problems = type_I_constraint_violations(d, n1, n2, n3)
                if not strict:
                    problems = [p for p in problems if "divisible" not in p]
                if problems:
                    continue
                eq = MarkovEqnI(d, n1, n2, n3, strict=strict)
                sols = brute_force_solutions(eq, seed_bound)
                if not sols:
                    continue
                for t in sols:
                    m, _ = minimize(eq, t)
                    if max(m) > seed_bound:
                        raise MarkovError(f"descent of {t} for {eq} left the search box")
                found.append(eq)
    return sorted(found, key=lambda e: (-e.d, e.coeffs))


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def derive_type_I_data(
    eq: MarkovEqnII,
    t: Sequence[int],
    nodes: Sequence[int],
    pqr: Sequence[int] | None = None,
) -> tuple[Fraction, Fraction, Triple]:
    """Link a type II triple and node counts to ``(lambda, d, (p, q, r))``.

    ``n_i p_i^2 = lambda k_i t_i^2`` with one common ``lambda``.  Without an
    explicit ``pqr`` the smallest integral choice is taken.
    """
    if not is_solution(eq, t):
        raise MarkovError(f"{tuple(t)} does not solve {eq}")
    ks = eq.coeffs
    ratios = [Fraction(ks[i] * t[i] * t[i], nodes[i]) for i in range(3)]
    if pqr is None:
        roots = [rational_sqrt(r / ratios[0]) for r in ratios]
        if any(r is None for r in roots):
            raise MarkovError("inconsistent node assignment")
        lcm = 1
        for r in roots:
            lcm = lcm * r.denominator // gcd(lcm, r.denominator)  # type: ignore[union-attr]
        pqr = tuple(int(lcm * r) for r in roots)  # type: ignore[operator]
    lams = [Fraction(nodes[i] * pqr[i] ** 2, ks[i] * t[i] * t[i]) for i in range(3)]
    if len(set(lams)) != 1:
        raise MarkovError("inconsistent node assignment")
    lam = lams[0]
    d = Fraction(eq.K ** 2 * ks[0] * ks[1] * ks[2]) / lam
    return lam, d, tuple(pqr)  # type: ignore[return-value]


def type_II_for(eqI: MarkovEqnI, t: Sequence[int] | None = None) -> tuple[MarkovEqnII, Triple]:
    """A type II equation and triple describing the same triangles as ``(eqI, t)``.

    Edge lengths are proportional to ``n_i t_i^2``.  We search factorizations
    ``n_i t_i^2 = g k_i a_i^2`` (``g`` the gcd of the lengths) whose ``K`` is
    integral and keep the one with the smallest coefficients.  ``t`` defaults
    to the least minimal solution.
    """
    if t is None:
        t = minimal_solutions(eqI)[0]
    if not is_solution(eqI, t):
        raise MarkovError(f"{tuple(t)} does not solve {eqI}")
    lengths = [n * x * x for n, x in zip(eqI.coeffs, t)]
    g = gcd(gcd(lengths[0], lengths[1]), lengths[2])
    reduced = [L // g for L in lengths]
    options = [[(L // (a * a), a) for a in range(1, isqrt(L) + 1) if L % (a * a) == 0] for L in reduced]
    best = None
    for c1 in options[0]:
        for c2 in options[1]:
            for c3 in options[2]:
                ks = (c1[0], c2[0], c3[0])
                abc = (c1[1], c2[1], c3[1])
                num = sum(k * a * a for k, a in zip(ks, abc))
                den = ks[0] * ks[1] * ks[2] * abc[0] * abc[1] * abc[2]
                if num % den:
                    continue
                key = (sum(ks), ks, abc)
                if best is None or key < best[0]:
                    best = (key, MarkovEqnII(num // den, *ks), abc)
    if best is None:
        raise MarkovError(f"no integral type II form for {eqI} at {tuple(t)}")
    return best[1], best[2]  # type: ignore[return-value]
