import re

import pydot
import pytest

from decomp.ddg import build_ddg
from decomp.lang import parse_source
from decomp.metrics import measure, compare, score_programs
from decomp.report import (
    DEFAULT_PALETTE,
    RenderOptions,
    render_dot,
    render_feedback_md,
    render_frames,
    to_json,
)
from decomp.samples import corpus_source, undecomposed_files
from decomp.split import color


def fill_colors(dot):
    return set(re.findall(r'fillcolor="([^"]+)"', dot))


def bold_edges(dot):
    return re.findall(r"n(\d+) -> n(\d+) \[color=\"black\", style=\"bold\"\]", dot)


def test_garden_dot(garden_ddg):
    dot = render_dot(garden_ddg, color(garden_ddg))
    assert fill_colors(dot) == set(DEFAULT_PALETTE)
    bold = {(int(u), int(v)) for u, v in bold_edges(dot)}
    assert {(6, 7), (6, 8), (6, 11), (6, 13)} <= bold
    assert "rank=source" in dot and "rank=sink" in dot


def test_two_node_chain():
    ddg = build_ddg(parse_source("x = float(input())\nprint(x)\n"))
    dot = render_dot(ddg, color(ddg))
    assert fill_colors(dot) == {"gray", "yellow"}
    assert len(bold_edges(dot)) == 1


def test_cross_edge_emphasis_can_be_turned_off(garden_ddg):
    dot = render_dot(garden_ddg, color(garden_ddg), RenderOptions(emphasize_cross_edges=False))
    assert bold_edges(dot) == []


def test_palette_extends_with_generated_colors():
    options = RenderOptions(palette=("gray",))
    assert options.color(0) == "gray"
    generated = {options.color(k) for k in range(1, 20)}
    assert len(generated) == 19 and all(c.startswith("#") for c in generated)
    with pytest.raises(ValueError):
        RenderOptions(palette=())


@pytest.mark.parametrize("path", undecomposed_files(), ids=lambda p: p.stem)
def test_dot_parses(path):
    ddg = build_ddg(parse_source(path.read_text()))
    dot = render_dot(ddg, color(ddg))
    (graph,) = pydot.graph_from_dot_data(dot)
    names = {n.get_name() for n in graph.get_nodes()} - {"node"}
    assert {f"n{n.id}" for n in ddg.nodes} <= names


def test_labels_are_escaped():
    ddg = build_ddg(parse_source('print("say \\"hi\\"")\n'))
    (graph,) = pydot.graph_from_dot_data(render_dot(ddg, color(ddg)))
    assert graph is not None


def test_frames(garden_ddg):
    frames = render_frames(garden_ddg)
    assert len(frames) == 4
    assert frames[-1] == render_dot(garden_ddg, color(garden_ddg))
    assert "white" in frames[0]
    for frame in frames:
        for node in garden_ddg.nodes:
            assert len(re.findall(rf"^  n{node.id} \[", frame, re.MULTILINE)) == 1


def test_frames_for_chain_and_diamond():
    chain = build_ddg(parse_source("x = 1\nprint(x)\n"))
    assert len(render_frames(chain)) == 1
    diamond = build_ddg(parse_source("a = float(input())\nb = a * 2\nprint(b)\nprint(b + 1)\n"))
    assert len(render_frames(diamond)) == 3


def test_identity_feedback():
    m = measure(parse_source(corpus_source("garden_reference")))
    text = render_feedback_md(compare(m, m))
    assert "composite 1.00" in text
    assert "No findings." in text


def test_ex1_feedback_cites_function_and_line():
    report = score_programs(
        parse_source(corpus_source("garden_ex1")), parse_source(corpus_source("garden_reference"))
    )
    text = render_feedback_md(report)
    section = text.split("### Single responsibility")[1].split("###")[0]
    assert "line 2" in section and "'plants'" in section
    assert text == render_feedback_md(report)


def test_nonequivalent_feedback_has_a_warning():
    wrong = corpus_source("garden_reference").replace("/ 27", "/ 9", 1)
    report = score_programs(parse_source(wrong), parse_source(corpus_source("garden_reference")))
    assert "> Warning:" in render_feedback_md(report)


def test_json_is_stable(garden_ddg):
    a = to_json(color(garden_ddg))
    assert a == to_json(color(garden_ddg)) and a.endswith("\n")
