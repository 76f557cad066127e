"""The ``atfkit`` command line.

Exit codes: 0 success, 1 a check or an operation precondition failed,
2 malformed arguments or input files.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import catalog
from .atbd import (
    DiagramError,
    almost_toric_blowup,
    canonicalize,
    dumps,
    monotone_distance,
    mutate,
    nodal_slide,
    nodal_trade,
    profile,
    read,
    toric_blowup,
    transfer_cut,
    validate,
)
from .atbd.analysis import describe
from .catalog.engine import LookupFailed, monotone_corner_size
from .markov import (
    MarkovError,
    brute_force_solutions,
    classify_type_I,
    enumerate_tree,
    format_triple,
    minimize,
    mutate_triple,
    parse_equation,
    parse_triple,
)
from .orbifold import (
    OrbifoldError,
    checked_degree,
    hull_edge_lengths,
    intersection_matrix,
    limit_orbifold,
    predicted_hull,
)
from .render import RenderOptions, render_svg
from .suites import SUITES, SuiteError, SuiteSpec, run_suite

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def table(rows: Sequence[Sequence[str]]) -> str:
    """Right-aligned columns, one space apart."""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(" ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return read(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except DiagramError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def q(x) -> str:
    return str(Fraction(x))


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.group} {args.action} needs {' '.join(missing)}")


# -- markov --------------------------------------------------------------------

def cmd_markov(args) -> int:
    if args.action == "classify":
        eqs = classify_type_I(strict=not args.relaxed, **({"seed_bound": args.bound} if args.bound else {}))
        for eq in eqs:
            print(eq)
        counts = {d: sum(1 for e in eqs if e.d == d) for d in range(9, 0, -1)}
        print("per degree: " + " ".join(f"{d}:{n}" for d, n in counts.items()) + f" total {len(eqs)}")
        return OK
    _need(args, "eq")
    try:
        eq = parse_equation(args.eq)
    except MarkovError as exc:
        raise UsageError(str(exc)) from exc
    if args.action == "solve":
        for t in brute_force_solutions(eq, args.bound or 40):
            print(format_triple(t))
        return OK
    if args.action == "tree":
        for t in sorted(enumerate_tree(eq, args.bound or 40), key=lambda t: (sum(t), t)):
            print(format_triple(t))
        return OK
    _need(args, "triple")
    try:
        t = parse_triple(args.triple)
    except (MarkovError, ValueError) as exc:
        raise UsageError(f"bad triple {args.triple!r}") from exc
    if args.action == "mutate":
        _need(args, "index")
        print(format_triple(mutate_triple(eq, t, args.index)))
        return OK
    m, word = minimize(eq, t)
    print(f"{format_triple(m)} via slots {''.join(map(str, word)) or '-'}")
    return OK


# -- atbd ----------------------------------------------------------------------

def _length(args, default):
    if args.length is None or args.length == "monotone":
        return default()
    try:
        return Fraction(args.length)
    except ValueError:
        raise UsageError(f"--length must be a rational or 'monotone', got {args.length!r}") from None


def cmd_atbd(args) -> int:
    d = _load(args.file)
    if args.action == "validate":
        rep = validate(d)
        for v in rep.violations:
            print(f"violation: {v}")
        print("valid" if rep.ok else "invalid")
        return OK if rep.ok else FAILED
    if args.action == "profile":
        prof = profile(d)
        print("node type:   " + " ".join(f"({n},{p})" for n, p in prof.node_type))
        print("length type: " + " ".join(q(L) for L in prof.length_type))
        if prof.lam is not None:
            print(f"lambda:      {q(prof.lam)}")
        print(describe(d))
        return OK
    if args.action == "canon":
        out = canonicalize(d)
    elif args.action == "trade":
        _need(args, "vertex")
        out = nodal_trade(d, args.vertex)
    elif args.action == "slide":
        _need(args, "cut", "to")
        try:
            to = [Fraction(t) for t in args.to.split(",")]
        except ValueError:
            raise UsageError(f"bad --to {args.to!r}") from None
        out = nodal_slide(d, args.cut, to)
    elif args.action in ("transfer", "mutate"):
        _need(args, "cut")
        op = transfer_cut if args.action == "transfer" else mutate
        out = op(d, args.cut, args.side, args.count)
    elif args.action == "blowup":
        _need(args, "vertex")
        out = toric_blowup(d, args.vertex, _length(args, lambda: monotone_corner_size(d, args.vertex)))
    else:
        _need(args, "point")
        try:
            p = [Fraction(v) for v in args.point.split(",")]
        except ValueError:
            raise UsageError(f"bad --point {args.point!r}") from None
        nu = _ints(args.normal, "--normal") if args.normal else None
        out = almost_toric_blowup(d, args.edge, p, _length(args, lambda: monotone_distance(d)), args.side, nu)
    _emit(dumps(out), args.output)
    return OK


# -- catalog -------------------------------------------------------------------

def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [("id", "steps", "surface", "final")]
        for sid in catalog.list_scripts():
            s = catalog.get_script(sid)
            fin = (s.final or {}).get("equation", "-") if s.verify else "stub"
            rows.append((sid, str(len(s)), s.surface or "-", fin))
        print(table(rows))
        return OK
    if args.action == "freeze":
        for p in catalog.write_goldens(args.output):
            print(p)
        return OK
    if args.action == "build":
        _need(args, "id")
        params = _ints(args.params, "--params") if args.params else None
        d = catalog.build(args.id, args.step, params, closed=not args.open)
        _emit(dumps(d), args.output)
        return OK
    rep = catalog.verify_catalog()
    checks = rep.checks
    if args.id:
        checks = [c for c in checks if c.script == args.id or c.script.startswith(args.id + "[")]
        if not checks:
            raise UsageError(f"no checks for {args.id!r}")
    sub = catalog.CatalogReport(checks)
    for line in sub.lines():
        print(line)
    print(f"{len(checks)} checks, {len(sub.failures)} failed")
    return OK if sub.ok else FAILED


# -- orbifold ------------------------------------------------------------------

def cmd_orbifold(args) -> int:
    d = _load(args.file)
    if args.action == "degree":
        print(q(checked_degree(d)))
        return OK
    if args.action == "hull":
        h = predicted_hull(d)
        rows = [("x", "y", "edge")]
        rows += [(str(v.x), str(v.y), str(L)) for v, L in zip(h.vertices, hull_edge_lengths(h))]
        print(table(rows))
        return OK
    o = limit_orbifold(d)
    if args.action == "limit":
        rows = [("vertex", "x", "y", "order", "edge", "length")]
        for i, (v, u, m, L) in enumerate(zip(o.vertices, o.edge_directions, o.corner_orders, o.edge_lengths)):
            rows.append((str(i), q(v.x), q(v.y), str(m), f"({u.x},{u.y})", q(L)))
        print(table(rows))
        return OK
    mat = intersection_matrix(o)
    print(table([[q(x) for x in row] for row in mat]))
    return OK


# -- render / verify -------------------------------------------------------------

def cmd_render(args) -> int:
    d = _load(args.file)
    try:
        opts = RenderOptions(args.scale, args.grid, args.labels)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(render_svg(d, opts), args.output)
    return OK


def cmd_verify(args) -> int:
    try:
        spec = SuiteSpec(args.suite, **{k: v for k, v in (("depth", args.depth), ("seed", args.seed)) if v is not None})
        rep = run_suite(spec)
    except SuiteError as exc:
        raise UsageError(str(exc)) from exc
    for line in rep.lines():
        print(line)
    return rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atfkit", description="Almost toric base diagrams and Markov equations.")
    sub = p.add_subparsers(dest="group", required=True)

    m = sub.add_parser("markov", help="Markov type I/II equations")
    m.add_argument("action", choices=["solve", "mutate", "tree", "minimize", "classify"])
    m.add_argument("--eq", help="II:K,k1,k2,k3 or I:d,n1,n2,n3")
    m.add_argument("--triple", help="a,b,c")
    m.add_argument("--index", type=int, help="slot 1, 2 or 3")
    m.add_argument("--bound", type=int, help="largest entry searched (40 by default)")
    m.add_argument("--relaxed", action="store_true", help="classify without the divisibility constraints")
    m.set_defaults(func=cmd_markov)

    a = sub.add_parser("atbd", help="diagram operations; results go to stdout or -o")
    a.add_argument("action", choices=["validate", "profile", "trade", "slide", "transfer", "mutate", "blowup",
                                      "atblowup", "canon"])
    a.add_argument("file")
    a.add_argument("--cut", type=int)
    a.add_argument("--side", choices=["left", "right"], default="left")
    a.add_argument("--count", type=int, help="nodes to move; all by default")
    a.add_argument("--length", help="blowup size, a rational or 'monotone' (default)")
    a.add_argument("--vertex", type=int, help="corner for trade and blowup")
    a.add_argument("--to", help="slide: new node positions t1,t2,... along the cut")
    a.add_argument("--point", help="atblowup: point x,y on an edge")
    a.add_argument("--edge", type=int, help="atblowup: edge index, found from --point when omitted")
    a.add_argument("--normal", help="atblowup: notch direction a,b")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_atbd)

    c = sub.add_parser("catalog", help="construction scripts and goldens")
    c.add_argument("action", choices=["list", "build", "verify", "freeze"])
    c.add_argument("--id")
    c.add_argument("--step", help="step number or name; 'final' or omitted for the final diagram")
    c.add_argument("--params", help="family parameters a,b")
    c.add_argument("--open", action="store_true", help="last step without its closing trades")
    c.add_argument("-o", "--output", help="build: diagram file; freeze: golden directory")
    c.set_defaults(func=cmd_catalog)

    o = sub.add_parser("orbifold", help="limit orbifold tables")
    o.add_argument("action", choices=["limit", "matrix", "degree", "hull"])
    o.add_argument("file")
    o.set_defaults(func=cmd_orbifold)

    r = sub.add_parser("render", help="SVG drawing")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.add_argument("--grid", action="store_true")
    r.add_argument("--labels", action="store_true")
    r.add_argument("--scale", type=int, default=RenderOptions.scale)
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify", help="named property suites")
    v.add_argument("--suite", required=True, help=", ".join(SUITES))
    v.add_argument("--depth", type=int)
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"atfkit: {exc}", file=sys.stderr)
        return USAGE
    except LookupFailed as exc:
        print(f"atfkit: {exc}", file=sys.stderr)
        return USAGE
    except (DiagramError, MarkovError, OrbifoldError) as exc:
        print(f"atfkit: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
