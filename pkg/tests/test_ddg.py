import random

import pytest
from hypothesis import given, settings, strategies as st

from decomp.ddg import (
    COMPLEX,
    DATA_PROCESSING,
    GOAL,
    SOURCE,
    build_ddg,
    canonical_form,
    dead_code,
    inline_program,
    program_form,
    run,
)
from decomp.errors import InlineError
from decomp.lang import parse_source
from decomp.samples import corpus_source

from conftest import same_behaviour


def form(source):
    return program_form(parse_source(source))


# ------------------------------------------------------------------ graph


def test_garden_graph_shape(garden_ddg):
    labels = [n.label for n in garden_ddg.nodes]
    assert len(garden_ddg.nodes) == 15
    assert labels[:5] == ["side_length", "plant_spacing", "soil_depth", "fill_depth", "pi"]
    assert [garden_ddg.node(g).label for g in garden_ddg.goal_order] == ["plants", "soil", "fill_area"]
    circle = labels.index("circle_area")
    consumers = {garden_ddg.node(s).label for s in garden_ddg.succs(circle)}
    assert consumers == {"semi_plants", "circle_plants", "soil", "fill_area"}


def test_node_kinds_and_constants(garden_ddg):
    pi = garden_ddg.node(4)
    assert pi.kind == SOURCE and pi.is_constant and not pi.has_input
    side = garden_ddg.node(0)
    assert side.kind == SOURCE and side.has_input and not side.is_constant
    assert all(garden_ddg.node(g).kind == GOAL for g in garden_ddg.goal_order)


def test_edges_point_forward_so_graph_is_acyclic(garden_ddg):
    assert all(u < v for u, v in garden_ddg.edges)


def test_reassignment_creates_new_versions():
    ddg = build_ddg(parse_source("x = 1\nx = x + 1\nprint(x)\n"))
    assert [n.bindings for n in ddg.nodes] == [(), (("x", 0),), (("x", 1),)]


def test_tags():
    ddg = build_ddg(parse_source(corpus_source("drive_times")))
    by_label = {n.label: n for n in ddg.nodes}
    assert DATA_PROCESSING in by_label["parts"].tags
    assert DATA_PROCESSING not in by_label["speed"].tags
    garden = build_ddg(parse_source(corpus_source("garden")))
    assert COMPLEX in garden.node(13).tags
    assert COMPLEX not in garden.node(5).tags


def test_blocks_read_variables_they_may_keep():
    ddg = build_ddg(parse_source("x = 1\nc = 2\nif c > 1:\n    x = 5\nprint(x)\n"))
    block = ddg.nodes[2]
    assert ("x", 0) in block.bindings


def test_dead_code_is_reported():
    ddg = build_ddg(parse_source("pi = 3\nprint(1)\n"))
    assert [n.label for n in dead_code(ddg)] == ["pi"]
    assert len(ddg.warnings) == 1 and ddg.warnings[0].node.label == "pi"


def test_build_ddg_rejects_functions():
    with pytest.raises(ValueError):
        build_ddg(parse_source("def f():\n    print(1)\n\nf()\n"))


def test_graph_json_is_deterministic(garden_ddg, garden):
    assert garden_ddg.to_dict() == build_ddg(garden).to_dict()


# -------------------------------------------------------------- canonical


@pytest.mark.parametrize(
    "a, b",
    [
        ("x = input()\ny = x\nprint(y)\n", "z = input()\nprint(z)\n"),
        ("a = float(input())\nb = a * 2\nc = b / 4\nprint(c)\n",
         "a = float(input())\nprint(a / 2)\n"),
        ("a = float(input())\nprint(2 * a * 3)\n", "a = float(input())\nprint(a * 6)\n"),
        ("a = 1\nb = 2\nprint(a + b)\n", "b = 2\na = 1\nprint(a + b)\n"),
    ],
)
def test_equivalent_programs_share_a_form(a, b):
    assert form(a) == form(b)


@pytest.mark.parametrize(
    "a, b",
    [
        ("x = input()\nprint(x)\n", "x = input()\nprint(x, x)\n"),
        ("a = float(input())\nprint(a / 2)\n", "a = float(input())\nprint(a / 3)\n"),
        ("a = float(input())\nb = float(input())\nprint(a - b)\n",
         "a = float(input())\nb = float(input())\nprint(b - a)\n"),
    ],
)
def test_different_programs_differ(a, b):
    assert form(a) != form(b)


def test_input_identity_is_by_position():
    a = "x = input('first')\ny = input('second')\nprint(x)\n"
    b = "x = input('a')\ny = input('b')\nprint(y)\n"
    assert form(a) != form(b)


def test_loops_are_compared_structurally():
    a = "n = int(input())\nt = 0\nfor k in range(n):\n    t = t + k\nprint(t)\n"
    b = "m = int(input())\ns = 0\nfor j in range(m):\n    s = s + j\nprint(s)\n"
    c = "m = int(input())\ns = 0\nfor j in range(m):\n    s = s * j\nprint(s)\n"
    assert form(a) == form(b)
    assert form(a) != form(c)


def test_reference_solution_matches_global_garden(garden):
    reference = parse_source(corpus_source("garden_reference"))
    assert program_form(reference) == program_form(garden)
    assert canonical_form(build_ddg(garden)).to_dict()["program"]


_ops = st.sampled_from(["+", "-", "*", "/"])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(_ops, st.integers(1, 9)), min_size=1, max_size=6))
def test_splitting_an_expression_into_steps_keeps_the_form(chain):
    whole = "x"
    for op, k in chain:
        whole = f"({whole} {op} {k})"
    steps = ["x = float(input())", "t0 = x"]
    for i, (op, k) in enumerate(chain):
        steps.append(f"t{i + 1} = t{i} {op} {k}")
    steps.append(f"print(t{len(chain)})")
    assert form(f"x = float(input())\nprint({whole})\n") == form("\n".join(steps) + "\n")


# -------------------------------------------------------------- inlining


def test_inlined_reference_has_no_functions_and_same_output():
    reference = parse_source(corpus_source("garden_reference"))
    flat = inline_program(reference)
    assert not flat.functions
    assert same_behaviour(reference, flat, ["num"] * 4) is None


def test_inline_handles_nested_calls_and_name_clashes():
    source = (
        "def double(x):\n    return x * 2\n\n"
        "def both(x, y):\n    return double(x) + double(y)\n\n"
        "x = 3\nprint(both(x, double(x)))\n"
    )
    program = parse_source(source)
    flat = inline_program(program)
    assert run(flat, []).lines == run(program, []).lines == ("18",)


def test_discarded_return_value_cannot_be_inlined():
    program = parse_source("def f():\n    return 1\n\nf()\nprint(2)\n")
    with pytest.raises(InlineError):
        inline_program(program)


# ------------------------------------------------------------ interpreter


def test_interpreter_prints_like_python():
    program = parse_source('x = 7 / 2\nprint("half:", x, 3 ** 2)\nprint(f"{x}!")\n')
    assert run(program, []).lines == ("half: 3.5 9", "3.5!")


def test_interpreter_reports_runtime_errors():
    program = parse_source("x = float(input())\nprint(1 / x)\n")
    assert run(program, ["0"]).error == "ZeroDivisionError"
    assert run(program, []).error is not None
    assert run(program, ["abc"]).error == "ValueError"


def test_interpreter_step_limit():
    program = parse_source("x = 0\nwhile x < 1:\n    x = x * 1\nprint(x)\n")
    outcome = run(program, [], step_limit=500)
    assert outcome.error is not None and outcome.lines == ()


def test_interpreter_calls_user_functions():
    program = parse_source(corpus_source("garden_reference"))
    outcome = run(program, ["8", "1", "3", "2"])
    assert [line.split(":")[0] for line in outcome.lines] == [
        "Plants needed", "Soil needed", "Fill needed"]


def test_interpreter_split_and_loops():
    program = parse_source(corpus_source("drive_times"))
    outcome = run(program, ["10 20 30", "60"])
    assert outcome.lines == ("Average drive time: 20.0", "Average distance: 20.0")
    assert run(program, ["", "60"]).lines[0] == "Average drive time: 0"


def test_random_inputs_are_reproducible():
    from decomp.samples import random_inputs

    kinds = ["num", "int", "words", "text"]
    assert random_inputs(kinds, random.Random(3)) == random_inputs(kinds, random.Random(3))
