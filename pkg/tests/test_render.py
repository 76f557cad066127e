import re

import pytest

from atfkit.atbd import DiagramError, make_diagram
from atfkit.catalog import build, default_golden_dir, golden_svg
from atfkit.render import RenderOptions, num, render_svg


def test_num():
    assert num(3) == "3"
    assert num("1/3") == "0.333333"
    assert num("-5/2") == "-2.5"
    assert num("1/8") == "0.125"


def test_deterministic(cp2_three_node):
    assert render_svg(cp2_three_node) == render_svg(cp2_three_node)


def test_cp2_elements(cp2_three_node):
    svg = render_svg(cp2_three_node, RenderOptions(show_grid=True))
    boundary = re.search(r'<g class="boundary"[^>]*>(.*?)</g>', svg, re.S).group(1)
    assert boundary.count("<line") == 3
    assert svg.count('<g class="cut"') == 3
    assert svg.count("stroke-dasharray") == 3
    assert svg.count("<circle") == 1


def test_no_cuts_no_dashes(cp2_triangle):
    assert "stroke-dasharray" not in render_svg(cp2_triangle, RenderOptions(show_grid=True))


def test_seam_edges_are_dashed():
    d = build("cp2x7.A", "A1")
    seams = sum(c.kind.value == "seam" for c in d.cuts)
    assert seams == 1
    assert render_svg(d).count("stroke-dasharray") == len(d.cuts) - seams + 2 * seams


def test_invalid_diagram():
    with pytest.raises(DiagramError):
        render_svg(make_diagram([(0, 0), (1, 1), (2, 2)]))


def test_scale_guard():
    with pytest.raises(ValueError):
        RenderOptions(scale=0)


def test_golden_svg():
    assert golden_svg("cp2") == (default_golden_dir() / "cp2.svg").read_text()
