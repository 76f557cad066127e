"""Diagram files: one JSON document per diagram, byte-stable layout."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from ..lattice import LatticeVec, RationalPoint, frac_str
from .diagram import ATBD, Cut, DiagramError, Kind


def to_dict(d: ATBD) -> dict:
    return {
        "label": d.label,
        "vertices": [[frac_str(v.x), frac_str(v.y)] for v in d.vertices],
        "roles": list(d.roles),
        "cuts": [
            {
                "direction": [int(c.direction.x), int(c.direction.y)],
                "kind": c.kind.value,
                "base": list(c.base),
                "nodes": [frac_str(t) for t in c.nodes],
            }
            for c in d.cuts
        ],
        "monotone_point": None
        if d.monotone_point is None
        else [frac_str(d.monotone_point.x), frac_str(d.monotone_point.y)],
    }


def from_dict(obj: dict) -> ATBD:
    try:
        verts = tuple(RationalPoint(Fraction(x), Fraction(y)) for x, y in obj["vertices"])
        cuts = tuple(
            Cut(
                LatticeVec(int(c["direction"][0]), int(c["direction"][1])),
                Kind(c["kind"]),
                tuple(int(i) for i in c["base"]),
                tuple(Fraction(t) for t in c["nodes"]),
            )
            for c in obj.get("cuts", [])
        )
        mp = obj.get("monotone_point")
        m = RationalPoint(Fraction(mp[0]), Fraction(mp[1])) if mp is not None else None
        roles = tuple(obj.get("roles") or ["delzant"] * len(verts))
        return ATBD(verts, roles, cuts, m, obj.get("label", ""))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DiagramError(f"malformed diagram document: {exc}") from exc


def dumps(d: ATBD) -> str:
    """Serialize with one vertex or cut per line so diffs stay readable."""
    obj = to_dict(d)
    lines = ["{", f'  "label": {json.dumps(obj["label"])},', '  "vertices": [']
    lines += [f"    {json.dumps(v)}," for v in obj["vertices"]]
    _strip_comma(lines, len(obj["vertices"]))
    lines.append("  ],")
    lines.append(f'  "roles": {json.dumps(obj["roles"])},')
    lines.append('  "cuts": [')
    lines += [f"    {json.dumps(c)}," for c in obj["cuts"]]
    _strip_comma(lines, len(obj["cuts"]))
    lines.append("  ],")
    lines.append(f'  "monotone_point": {json.dumps(obj["monotone_point"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _strip_comma(lines: list[str], count: int) -> None:
    if count:
        lines[-1] = lines[-1].rstrip(",")


def loads(text: str) -> ATBD:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"not a diagram document: {exc}") from exc
    return from_dict(obj)


def read(path: Union[str, Path]) -> ATBD:
    return loads(Path(path).read_text())


def write(d: ATBD, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(d))
