"""Deterministic SVG drawings of diagrams.

Boundary edges are solid, cuts dashed, nodes drawn as crosses and the
monotone point as a filled dot.  Coordinates are exact rationals rounded to
six decimals, so equal diagrams give byte-equal files.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from xml.sax.saxutils import escape

from .atbd import ATBD, DiagramError, Kind, validate

STROKE = 2
CUT_STROKE = 1
DASH = "6 4"
CROSS = Fraction(1, 8)  # half-width of a node cross, lattice units
DOT = 3


@dataclass(frozen=True)
class RenderOptions:
    scale: int = 40
    show_grid: bool = False
    show_labels: bool = False

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("scale must be at least 1")


def num(q) -> str:
    """Exact value rounded half-even to six decimals, trailing zeros trimmed."""
    k = round(Fraction(q) * 10**6)
    sign = "-" if k < 0 else ""
    whole, frac = divmod(abs(k), 10**6)
    if not frac:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:06d}".rstrip("0")


class _Frame:
    def __init__(self, d: ATBD, scale: int):
        pts = list(d.vertices) + ([d.monotone_point] if d.monotone_point is not None else [])
        self.x0 = floor(min(p[0] for p in pts)) - 1
        self.x1 = ceil(max(p[0] for p in pts)) + 1
        self.y0 = floor(min(p[1] for p in pts)) - 1
        self.y1 = ceil(max(p[1] for p in pts)) + 1
        self.scale = scale

    @property
    def size(self) -> tuple[int, int]:
        return (self.x1 - self.x0) * self.scale, (self.y1 - self.y0) * self.scale

    def xy(self, p) -> tuple[str, str]:
        return num((Fraction(p[0]) - self.x0) * self.scale), num((self.y1 - Fraction(p[1])) * self.scale)


def _line(f: _Frame, a, b, extra: str = "") -> str:
    (x1, y1), (x2, y2) = f.xy(a), f.xy(b)
    return f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{extra}/>'


def _cross(f: _Frame, p) -> list[str]:
    x, y = Fraction(p[0]), Fraction(p[1])
    return [
        _line(f, (x - CROSS, y - CROSS), (x + CROSS, y + CROSS)),
        _line(f, (x - CROSS, y + CROSS), (x + CROSS, y - CROSS)),
    ]


def render_svg(d: ATBD, opts: RenderOptions = RenderOptions()) -> str:
    rep = validate(d)
    if not rep.ok:
        raise DiagramError("cannot render an invalid diagram: " + "; ".join(rep.violations))
    f = _Frame(d, opts.scale)
    w, h = f.size
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if d.label:
        out.append(f"<title>{escape(d.label)}</title>")
    if opts.show_grid:
        out.append('<g class="grid" stroke="#dddddd" stroke-width="1">')
        for x in range(f.x0, f.x1 + 1):
            out.append(_line(f, (x, f.y0), (x, f.y1)))
        for y in range(f.y0, f.y1 + 1):
            out.append(_line(f, (f.x0, y), (f.x1, y)))
        out.append("</g>")
    seams = d.seam_edges()
    out.append(f'<g class="boundary" stroke="black" stroke-width="{STROKE}" fill="none">')
    for i in range(len(d)):
        if i not in seams:
            out.append(_line(f, *d.edge(i)))
    out.append("</g>")
    for ci, cut in enumerate(d.cuts):
        out.append(f'<g class="cut" stroke="black" stroke-width="{CUT_STROKE}" fill="none">')
        if cut.kind is Kind.SEAM:
            s = cut.base[0]
            dashed = [d.edge(s), d.edge(s + 1)]
        else:
            dashed = [d.cut_segment(ci)]
        for a, b in dashed:
            out.append(_line(f, a, b, f' stroke-dasharray="{DASH}"'))
        for p in d.node_points(ci):
            out.extend(_cross(f, p))
        out.append("</g>")
    if d.monotone_point is not None:
        x, y = f.xy(d.monotone_point)
        out.append(f'<circle class="monotone" cx="{x}" cy="{y}" r="{DOT}" fill="black"/>')
    if opts.show_labels:
        out.append('<g class="labels" font-family="monospace" font-size="12" fill="black">')
        for ci, cut in enumerate(d.cuts):
            x, y = f.xy(d.node_points(ci)[-1])
            out.append(f'<text x="{x}" y="{y}" dx="4" dy="-4">({cut.direction.x},{cut.direction.y})x{cut.n}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
