"""Replay engine for construction scripts.

A script is a base diagram plus numbered steps; each step is a list of
operations.  Operations select cuts and corners by node label (the cut
direction, base towards node), so every replay re-checks the labels the
construction is supposed to produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from ..atbd import (
    ATBD,
    DELZANT,
    DiagramError,
    Kind,
    ROTATE_QUARTER,
    almost_toric_blowup,
    is_monotone,
    make_diagram,
    monotone_distance,
    mutate_indexed,
    nodal_slide,
    nodal_trade,
    place_nodes_canonically,
    rescale,
    toric_blowup,
    transfer_cut_indexed,
    transform,
    validate,
)
from ..atbd.operations import hidden_trade_direction, trade_direction
from ..lattice import LatticeVec, point, wedge


class ScriptError(DiagramError):
    """A replay step failed or produced a label other than the expected one."""


class LookupFailed(ScriptError):
    """No such script, step or parameter set."""


def node_count(d: ATBD, label) -> int:
    w = LatticeVec(*label)
    return sum(c.n for c in d.cuts if c.kind is Kind.RAY and c.direction == w)


def _cut_with(d: ATBD, label, count: int) -> int:
    w = LatticeVec(*label)
    hits = [ci for ci, c in enumerate(d.cuts) if c.kind is Kind.RAY and c.direction == w]
    if not hits:
        raise ScriptError(f"expected a {tuple(w)}-node, found cuts {[tuple(c.direction) for c in d.cuts]}")
    ci = max(hits, key=lambda i: d.cuts[i].n)
    if d.cuts[ci].n < count:
        raise ScriptError(f"expected {count} {tuple(w)}-nodes, found {d.cuts[ci].n}")
    return ci


def tradeable_corner(d: ATBD, label) -> int:
    """The Delzant corner whose nodal trade yields ``label`` through the monotone point."""
    w = LatticeVec(*label)
    m = d.monotone_point
    found = []
    for i, role in enumerate(d.roles):
        tw = trade_direction(d, i) if role == DELZANT else hidden_trade_direction(d, i)
        if tw != w:
            continue
        v = d.vertex(i)
        if m is None or wedge(w, (m[0] - v[0], m[1] - v[1])) == 0:
            found.append(i)
    if len(found) != 1:
        raise ScriptError(f"expected one corner trading to a {tuple(w)}-node, found {len(found)}")
    return found[0]


def monotone_corner_size(d: ATBD, vertex: int) -> Fraction:
    """Corner blowup size that keeps the monotone point equidistant."""
    v = d.vertex(vertex)
    e1, e2 = -d.e_in(vertex), d.e_out(vertex)
    # functional f with f(e1) = f(e2) = 1; the cut edge is f(x - v) = size
    det = wedge(e1, e2)
    f = ((e2.y - e1.y) * Fraction(1, det), (e1.x - e2.x) * Fraction(1, det))
    m = d.monotone_point
    fm = f[0] * (m[0] - v[0]) + f[1] * (m[1] - v[1])
    return fm - monotone_distance(d)


def _op_trade(d: ATBD, op: dict) -> ATBD:
    i = tradeable_corner(d, op["node"])
    out = nodal_trade(d, i)
    if tuple(out.cuts[out.cut_at(i)].direction) != tuple(op["node"]):
        raise ScriptError(f"expected a {tuple(op['node'])}-node")
    return out


def _op_mutate(d: ATBD, op: dict) -> ATBD:
    count = op.get("count", "all")
    w = op["node"]
    if count == "all":
        ci = _cut_with(d, w, 1)
        k = None
        total = op.get("total")
        if total is not None and d.cuts[ci].n != total:
            raise ScriptError(f"expected {total} {tuple(w)}-nodes, found {d.cuts[ci].n}")
    else:
        k = int(count)
        ci = _cut_with(d, w, k)
    out, _ = mutate_indexed(d, ci, op.get("side", "left"), k)
    return out


def _op_transfer(d: ATBD, op: dict) -> ATBD:
    if "seam" in op:
        u = LatticeVec(*op["seam"])
        hits = [ci for ci, c in enumerate(d.cuts) if c.kind is Kind.SEAM and c.direction in (u, -u)]
        if not hits:
            raise ScriptError("expected a seam to transfer")
        ci = hits[0]
    else:
        ci = _cut_with(d, op["node"], 1)
    out, idx = transfer_cut_indexed(d, ci, op.get("side", "left"))
    out = place_nodes_canonically(out)
    if "expect" in op and tuple(out.cuts[idx].direction) != tuple(op["expect"]):
        raise ScriptError(f"expected a {tuple(op['expect'])}-node, got {tuple(out.cuts[idx].direction)}")
    return out


def _op_blowup(d: ATBD, op: dict) -> ATBD:
    target = point(*op["corner"])
    if target not in d.vertices:
        raise ScriptError(f"no corner at {tuple(target)}")
    i = d.vertices.index(target)
    size = op.get("length", "monotone")
    ell = monotone_corner_size(d, i) if size == "monotone" else Fraction(size)
    return toric_blowup(d, i, ell)


def _op_atblowup(d: ATBD, op: dict) -> ATBD:
    p = point(*op["point"])
    size = op.get("length", "monotone")
    ell = monotone_distance(d) if size == "monotone" else Fraction(size)
    if "slide" in op:
        # pull every node towards its base to clear room for the notch
        f = Fraction(op["slide"])
        for ci, c in enumerate(d.cuts):
            if c.kind is Kind.RAY:
                d = nodal_slide(d, ci, [t * f for t in c.nodes])
    return almost_toric_blowup(d, None, p, ell, op.get("side", "left"), op.get("normal"))


def _op_rotate(d: ATBD, op: dict) -> ATBD:
    for _ in range(int(op.get("quarters", 1)) % 4):
        d = transform(d, ROTATE_QUARTER)
    return d


def _op_scale(d: ATBD, op: dict) -> ATBD:
    return rescale(d, Fraction(op["factor"]))


OPS: dict[str, Callable[[ATBD, dict], ATBD]] = {
    "trade": _op_trade,
    "mutate": _op_mutate,
    "transfer": _op_transfer,
    "blowup": _op_blowup,
    "atblowup": _op_atblowup,
    "rotate": _op_rotate,
    "scale": _op_scale,
}


def apply_op(d: ATBD, op: dict) -> ATBD:
    name = op["op"]
    if name not in OPS:
        raise ScriptError(f"unknown operation {name!r}")
    try:
        out = OPS[name](d, op)
    except ScriptError:
        raise
    except DiagramError as exc:
        raise ScriptError(f"{name} failed: {exc}") from exc
    return out


@dataclass
class Step:
    name: str
    ops: list[dict] = field(default_factory=list)
    note: str = ""


@dataclass
class Script:
    id: str
    title: str
    steps: list[Step]
    base: Optional[dict] = None
    source: Optional[str] = None  # "other.id@STEP"
    scale: Fraction = Fraction(1)
    final: Optional[dict] = None
    surface: str = ""
    blowups: Optional[int] = None
    parameters: list[str] = field(default_factory=list)
    verify: bool = True
    family: Optional[str] = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def expected_degree(self) -> int:
        return 8 if self.blowups is None else 9 - self.blowups

    def step_number(self, step) -> int:
        """1-based position of ``step`` given as a number or a step name."""
        names = [s.name for s in self.steps]
        if isinstance(step, str) and step in names:
            return names.index(step) + 1
        try:
            k = int(step)
        except (TypeError, ValueError):
            raise LookupFailed(f"{self.id} has no step {step!r}; steps are {', '.join(names)}") from None
        if not 1 <= k <= len(self.steps):
            raise LookupFailed(f"{self.id} has steps 1..{len(self.steps)}")
        return k


def parse_script(obj: dict) -> Script:
    try:
        steps = [Step(str(s["name"]), list(s.get("ops") or []), s.get("note", "")) for s in obj["steps"]]
        known = {"id", "title", "steps", "base", "source", "scale", "final", "surface", "blowups",
                 "parameters", "verify", "family"}
        return Script(
            id=obj["id"],
            title=obj.get("title", ""),
            steps=steps,
            base=obj.get("base"),
            source=obj.get("source"),
            scale=Fraction(str(obj.get("scale", 1))),
            final=obj.get("final"),
            surface=obj.get("surface", ""),
            blowups=obj.get("blowups"),
            parameters=list(obj.get("parameters") or []),
            verify=bool(obj.get("verify", True)),
            family=obj.get("family"),
            meta={k: v for k, v in obj.items() if k not in known},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScriptError(f"malformed script: {exc}") from exc


def base_diagram(spec: dict) -> ATBD:
    return make_diagram(spec["vertices"], monotone_point=spec.get("monotone_point"))


def _checked_step(d: ATBD, where: str) -> ATBD:
    rep = validate(d)
    if not rep.ok:
        raise ScriptError(f"{where} invalid: {rep.violations}")
    if d.monotone_point is not None and not is_monotone(d):
        raise ScriptError(f"{where} is not monotone")
    return d


def run_ops(d: ATBD, ops, where: str) -> ATBD:
    for op in ops:
        try:
            d = apply_op(d, op)
        except ScriptError as exc:
            raise ScriptError(f"{where}: {exc}") from exc
    return d


def replay(script: Script, upto=None, resolve=None) -> list[ATBD]:
    """Diagrams after each step up to ``upto`` (a number or step name).

    ``resolve(id, step)`` supplies the starting diagram of scripts that
    continue another one.
    """
    if script.source is not None:
        if resolve is None:
            raise ScriptError(f"{script.id} needs a resolver for {script.source}")
        sid, step = script.source.split("@")
        d = resolve(sid, step)
    else:
        d = base_diagram(script.base)
    if script.scale != 1:
        d = rescale(d, script.scale)
    k = len(script.steps) if upto is None else script.step_number(upto)
    out = []
    for step in script.steps[:k]:
        where = f"{script.id} step {step.name}"
        d = run_ops(d, step.ops, where).with_label(f"{script.id}:{step.name}")
        out.append(_checked_step(d, where))
    return out


def close(script: Script, d: ATBD) -> ATBD:
    """Apply the closing operations of the script's final diagram."""
    if not script.final:
        raise ScriptError(f"{script.id} has no final diagram")
    where = f"{script.id} final"
    d = run_ops(d, script.final.get("close") or [], where).with_label(f"{script.id}:final")
    return _checked_step(d, where)
