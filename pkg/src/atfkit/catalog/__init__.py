"""Replayable construction scripts, golden records and catalog verification."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import yaml

from ..atbd import ATBD, DiagramError, canonicalize, is_monotone, is_triangular, profile, to_dict, validate
from ..lattice import frac_str
from ..markov import MarkovEqnI, MarkovError, classify_type_I, is_solution
from ..orbifold import (
    OrbifoldError,
    checked_degree,
    corner_affine_angle,
    hull_edge_lengths,
    predicted_hull,
)
from .engine import LookupFailed, Script, ScriptError, close, parse_script, replay
from .family import family_edges, family_steps, markov_pairs

GOLDEN_VERSION = "v1"
FAMILY_PAIRS = 6
_FAMILIES = {"cp2x1": family_steps}


def _script_dir():
    return resources.files(__package__) / "scripts"


def default_golden_dir() -> Path:
    env = os.environ.get("ATFKIT_GOLDEN_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files(__package__) / "golden" / GOLDEN_VERSION))


@lru_cache(maxsize=1)
def _scripts() -> dict[str, Script]:
    out = {}
    for entry in sorted(_script_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            s = parse_script(yaml.safe_load(entry.read_text()))
            out[s.id] = s
    return out


def list_scripts() -> list[str]:
    return sorted(_scripts())


def get_script(sid: str) -> Script:
    try:
        return _scripts()[sid]
    except KeyError:
        raise LookupFailed(f"unknown script {sid!r}") from None


@lru_cache(maxsize=None)
def _replay(sid: str) -> tuple[ATBD, ...]:
    return tuple(replay(get_script(sid), resolve=_resolve))


def _resolve(sid: str, step) -> ATBD:
    s = get_script(sid)
    return _replay(sid)[s.step_number(step) - 1]


@lru_cache(maxsize=None)
def _final(sid: str) -> ATBD:
    s = get_script(sid)
    return close(s, _replay(sid)[-1])


def _family(s: Script, params) -> list[ATBD]:
    if s.meta.get("unverifiable"):
        raise LookupFailed(f"{s.id} is a stub: {s.meta['unverifiable']}")
    if params is None or len(params) != len(s.parameters):
        raise LookupFailed(f"{s.id} needs parameters {','.join(s.parameters)}")
    return _FAMILIES[s.family](*(int(p) for p in params))


def steps(sid: str, params: Optional[Sequence[int]] = None) -> list[ATBD]:
    """Every step diagram of a script, in order."""
    s = get_script(sid)
    if s.family is not None:
        return _family(s, params)
    return list(_replay(sid))


def build(sid: str, step=None, params: Optional[Sequence[int]] = None, closed: bool = True) -> ATBD:
    """Diagram after ``step`` (number or name); the final diagram when omitted.

    The last step includes the script's closing trades unless ``closed`` is
    false; ``"final"`` is an alias for it.
    """
    s = get_script(sid)
    if s.family is not None:
        out = _family(s, params)
        return out[-1] if step is None or step == "final" else out[s.step_number(step) - 1]
    if step == "final" and s.final is None:
        raise LookupFailed(f"{sid} has no final diagram")
    k = len(s) if step is None or step == "final" else s.step_number(step)
    if k == len(s) and s.final is not None and closed:
        return _final(sid)
    return _replay(sid)[k - 1]


def final_scripts() -> list[str]:
    return [sid for sid in list_scripts() if get_script(sid).final is not None and get_script(sid).verify]


def final_equation(d: ATBD) -> MarkovEqnI:
    """The type I equation of a triangular diagram, coefficients sorted."""
    prof = profile(d)
    deg = checked_degree(d)
    if deg.denominator != 1:
        raise OrbifoldError(f"non-integral degree {deg}")
    pairs = sorted(prof.node_type)
    eq = MarkovEqnI(int(deg), *(n for n, _ in pairs), strict=False)
    if not is_solution(eq, [p for _, p in pairs]):
        raise MarkovError(f"node type {prof.node_type} does not solve {eq}")
    return eq


# -- golden records ------------------------------------------------------------

def _diagram_record(d: ATBD) -> dict:
    return to_dict(d)


def _final_record(d: ATBD) -> dict:
    prof = profile(d)
    hull = predicted_hull(d)
    return {
        "diagram": to_dict(d),
        "canonical": to_dict(canonicalize(d)),
        "node_type": [list(t) for t in prof.node_type],
        "length_type": [frac_str(L) for L in prof.length_type],
        "degree": frac_str(checked_degree(d)),
        "equation": str(final_equation(d)),
        "hull": [list(v) for v in hull.vertices],
        "hull_edge_lengths": hull_edge_lengths(hull),
    }


def golden_record(sid: str) -> dict:
    s = get_script(sid)
    rec: dict = {"id": sid, "version": GOLDEN_VERSION}
    if s.family is not None:
        members = []
        for a, b in markov_pairs(FAMILY_PAIRS):
            out = family_steps(a, b)
            members.append({"params": [a, b], "steps": [_diagram_record(d) for d in out]})
        rec["members"] = members
        return rec
    rec["steps"] = [
        {"name": st.name, "diagram": _diagram_record(d)} for st, d in zip(s.steps, _replay(sid))
    ]
    if s.final is not None:
        rec["final"] = _final_record(_final(sid))
    return rec


def dump_record(rec: dict) -> str:
    return json.dumps(rec, indent=1, sort_keys=True) + "\n"


def golden_ids() -> list[str]:
    return [sid for sid in list_scripts() if get_script(sid).verify]


def write_goldens(directory: Optional[Path] = None) -> list[Path]:
    directory = Path(directory) if directory is not None else default_golden_dir()
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for sid in golden_ids():
        p = directory / f"{sid}.json"
        p.write_text(dump_record(golden_record(sid)))
        paths.append(p)
        if get_script(sid).final is not None:
            p = directory / f"{sid}.svg"
            p.write_text(golden_svg(sid))
            paths.append(p)
    return paths


def golden_svg(sid: str) -> str:
    from ..render import RenderOptions, render_svg

    return render_svg(_final(sid), RenderOptions(show_grid=True, show_labels=True))


# -- verification --------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    script: str
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CatalogReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, script: str, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(script, name, bool(ok), detail))

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        return [
            f"{'ok  ' if c.ok else 'FAIL'} {c.script:14} {c.name:18} {c.detail}".rstrip() for c in self.checks
        ]


def _verify_final(sid: str, rep: CatalogReport, strict: set, relaxed: set) -> Optional[MarkovEqnI]:
    s = get_script(sid)
    try:
        d = _final(sid)
    except DiagramError as exc:
        rep.add(sid, "replay", False, str(exc))
        return None
    rep.add(sid, "replay", True)
    rep.add(sid, "valid", validate(d).ok)
    rep.add(sid, "monotone", is_monotone(d))
    rep.add(sid, "triangular", is_triangular(d))
    try:
        eq = final_equation(d)
    except (DiagramError, MarkovError) as exc:
        rep.add(sid, "markov-type-I", False, str(exc))
        return None
    rep.add(sid, "markov-type-I", True, f"{profile(d).node_type} solves {eq}")
    total = eq.n1 + eq.n2 + eq.n3 + eq.d
    rep.add(sid, "sum-twelve", total == 12, f"n1+n2+n3+d = {total}")
    rep.add(sid, "degree", eq.d == s.expected_degree, f"{eq.d}, expected {s.expected_degree}")
    declared = s.final.get("equation")
    if declared is not None:
        rep.add(sid, "declared-equation", str(eq) == declared, f"declared {declared}")
    key = (eq.d, eq.coeffs)
    rep.add(sid, "classified", key in strict, "divisibility constraints" if key not in strict else "")
    rep.add(sid, "classified-relaxed", key in relaxed)
    return eq


def _verify_family(sid: str, rep: CatalogReport) -> None:
    for a, b in markov_pairs(FAMILY_PAIRS):
        tag = f"{sid}[{a},{b}]"
        try:
            d = family_steps(a, b)[-1]
            edges = family_edges(d, a, b)
        except DiagramError as exc:
            rep.add(tag, "replay", False, str(exc))
            continue
        rep.add(tag, "monotone", validate(d).ok and is_monotone(d))
        deg = checked_degree(d)
        rep.add(tag, "degree", deg == 8, frac_str(deg))
        want = {
            "A": Fraction(a * a - b * b, b * b),
            "B": Fraction(b * b - a * a, a * a),
            "C": Fraction(1, a * a * b * b),
            "E": Fraction(-1),
        }
        got = {t: edges.self_intersection(t) for t in "ABCE"}
        rep.add(tag, "self-intersections", got == want, " ".join(f"{t}.{t}={frac_str(v)}" for t, v in got.items()))
        angle = corner_affine_angle(predicted_hull(d), edges.normal("A"))
        rep.add(tag, "hull-angle", angle == 3 * a - b, f"{angle}, expected 3a-b = {3 * a - b}")


def _verify_golden(sid: str, rep: CatalogReport, golden_dir: Path) -> None:
    path = golden_dir / f"{sid}.json"
    if not path.exists():
        rep.add(sid, "golden", False, f"missing {path}")
        return
    _compare(sid, "golden", dump_record(golden_record(sid)), path.read_text(), rep)
    if get_script(sid).final is not None:
        svg = golden_dir / f"{sid}.svg"
        if not svg.exists():
            rep.add(sid, "golden-svg", False, f"missing {svg}")
            return
        _compare(sid, "golden-svg", golden_svg(sid), svg.read_text(), rep)


def _compare(sid: str, name: str, fresh: str, stored: str, rep: CatalogReport) -> None:
    if fresh == stored:
        rep.add(sid, name, True)
        return
    a, b = fresh.splitlines(), stored.splitlines()
    line = next((i for i, (x, y) in enumerate(zip(a, b)) if x != y), min(len(a), len(b)))
    rep.add(sid, name, False, f"mismatch at line {line + 1}")


def verify_catalog(golden_dir: Optional[Path] = None, goldens: bool = True) -> CatalogReport:
    """Replay every verifiable script and check finals, the family and goldens."""
    rep = CatalogReport()
    strict = {(e.d, e.coeffs) for e in classify_type_I()}
    relaxed = {(e.d, e.coeffs) for e in classify_type_I(strict=False)}
    found = set()
    for sid in list_scripts():
        s = get_script(sid)
        if not s.verify:
            rep.add(sid, "skipped", True, s.meta.get("unverifiable", "not verifiable"))
            continue
        if s.family is not None:
            _verify_family(sid, rep)
        elif s.final is not None:
            eq = _verify_final(sid, rep, strict, relaxed)
            if eq is not None:
                found.add((eq.d, eq.coeffs))
        else:
            try:
                _replay(sid)
                rep.add(sid, "replay", True)
            except DiagramError as exc:
                rep.add(sid, "replay", False, str(exc))
        if goldens:
            _verify_golden(sid, rep, Path(golden_dir) if golden_dir is not None else default_golden_dir())

    def fmt(keys):
        return " ".join(sorted(f"I:{d},{n[0]},{n[1]},{n[2]}" for d, n in keys)) or "-"

    rep.add("catalog", "equations=strict", found == strict,
            f"missing {fmt(strict - found)}; extra {fmt(found - strict)}")
    rep.add("catalog", "equations=relaxed", found == relaxed,
            f"missing {fmt(relaxed - found)}; extra {fmt(found - relaxed)}")
    return rep


__all__ = [
    "CatalogReport", "Check", "LookupFailed", "Script", "ScriptError", "build", "default_golden_dir", "dump_record",
    "final_equation", "final_scripts", "get_script", "golden_record", "list_scripts", "steps",
    "verify_catalog", "write_goldens",
]
