import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from decomp.ddg import build_ddg, program_form, run
from decomp.errors import NoGoalsError
from decomp.lang import check_program, parse_source
from decomp.samples import corpus_source, undecomposed_files, input_kinds
from decomp.split import (
    MAIN,
    check_plan,
    color,
    coloring_steps,
    derive_plan,
    emit_refactored_source,
    find_duplicates,
    refine_plan,
    split_program,
)
from decomp.split.coloring import GOAL_KIND, SHARED_KIND
from decomp.split.duplicates import ALPHA, CONSTANT_FACTOR, root_chain, strip_literal

from conftest import same_behaviour
from dags import coloring_violations, random_dag_program

DIAMOND = "a = float(input())\nb = a * 2\nprint(b + 1)\nprint(b - 1)\n"


# --------------------------------------------------------------- coloring


def test_garden_coloring_has_five_partitions(garden_ddg):
    coloring = color(garden_ddg)
    assert len(coloring.colors) == 5
    assert coloring.kinds[MAIN] == "main"
    shared = [c for c, k in coloring.kinds.items() if k == SHARED_KIND]
    assert len(shared) == 1
    members = {garden_ddg.node(n).label for n in coloring.members(shared[0])}
    assert members == {"pi", "radius", "circle_area"}
    inputs = {garden_ddg.node(n).label for n in coloring.members(MAIN)}
    assert inputs == {"side_length", "plant_spacing", "soil_depth", "fill_depth"}


def test_goal_colors_follow_goal_order(garden_ddg):
    coloring = color(garden_ddg)
    assert coloring.goal_of == {1: 10, 2: 12, 3: 14}
    assert all(coloring.kinds[c] == GOAL_KIND for c in (1, 2, 3))


def test_coloring_steps_on_garden_and_diamond(garden_ddg):
    steps = coloring_steps(garden_ddg)
    assert [s.event for s in steps] == ["goal", "collision", "goal", "goal"]
    assert steps[1].node == 6  # circle_area becomes shared
    diamond = build_ddg(parse_source(DIAMOND))
    assert [s.event for s in coloring_steps(diamond)] == ["goal", "collision", "goal"]


def test_single_goal_chain_has_one_step():
    ddg = build_ddg(parse_source("x = 1\ny = x + 1\nprint(y)\n"))
    assert len(coloring_steps(ddg)) == 1


def test_no_goals_is_an_error():
    with pytest.raises(NoGoalsError):
        color(build_ddg(parse_source("x = 1\n")))
    with pytest.raises(NoGoalsError):
        color(build_ddg(parse_source("")))


def test_coloring_is_deterministic(garden_ddg):
    assert color(garden_ddg).to_dict() == color(garden_ddg).to_dict()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_coloring_agrees_with_reachability(seed):
    ddg = build_ddg(parse_source(random_dag_program(random.Random(seed))))
    assert coloring_violations(ddg, color(ddg)) == []


# ------------------------------------------------------------------- plan


def test_garden_plan_functions(garden, garden_ddg):
    plan = derive_plan(garden_ddg, color(garden_ddg), garden)
    names = [fn.suggested_name for fn in plan.functions]
    assert names == ["plants", "soil", "fill_area", "circle_area"]
    circle = plan.function("circle_area")
    assert circle.params == ("side_length",) and circle.returns == ("circle_area",)
    callers = [fn.suggested_name for fn in plan.functions if "circle_area" in fn.calls]
    assert callers == ["plants", "soil", "fill_area"]
    assert check_plan(plan) == []


def test_unlocalized_plan_passes_shared_values_through_main(garden, garden_ddg):
    plan = derive_plan(garden_ddg, color(garden_ddg), garden, localize=False)
    assert any("circle_area(" in line for line in plan.main_body)
    assert set(plan.function("plants").params) == {"circle_area", "plant_spacing"}
    assert program_form(parse_source(emit_refactored_source(plan))) == program_form(garden)


def test_cross_edges_connect_different_functions(garden, garden_ddg):
    plan = derive_plan(garden_ddg, color(garden_ddg), garden)
    assert plan.cross_edges
    assert all(e.source_function != e.target_function for e in plan.cross_edges)


def test_plan_json_round_trips(garden, garden_ddg):
    plan = derive_plan(garden_ddg, color(garden_ddg), garden)
    text = json.dumps(plan.to_dict(), sort_keys=True)
    assert json.loads(text) == plan.to_dict()


# ------------------------------------------------------------------- emit


@pytest.mark.parametrize("path", undecomposed_files(), ids=lambda p: p.stem)
def test_emitted_program_is_valid_and_equivalent(path):
    source = path.read_text()
    program = parse_source(source)
    result = split_program(program)
    for plan in (result.plan, result.refined):
        emitted = parse_source(emit_refactored_source(plan))
        check_program(emitted)
        assert program_form(emitted) == program_form(program)
        assert same_behaviour(program, emitted, input_kinds(source), trials=10) is None
        assert check_plan(plan) == []


def test_single_print_program_keeps_a_main():
    out = split_program(parse_source('print("hi")\n')).source
    assert 'print("hi")' in out and run(parse_source(out), []).lines == ("hi",)


# -------------------------------------------------------------- duplicates


def test_root_chain_and_strip_literal():
    expr = parse_source("a = 1\nb = 2\nx = a / 2 / b ** 2\n").global_statements[2].values[0]
    assert [op for op, _ in root_chain(expr)] == ["*", "/", "/"]
    key, multiplier, pos = strip_literal(expr)
    assert multiplier == Fraction(1, 2) and pos == 1


def test_garden_factor_two_group(garden_ddg):
    groups = find_duplicates(garden_ddg)
    factor = [g for g in groups if g.kind == CONSTANT_FACTOR]
    assert len(factor) == 1
    group = factor[0]
    labels = [garden_ddg.node(m).label for m in group.members]
    assert labels == ["semi_plants", "circle_plants"]
    assert group.factor == 2
    assert group.to_dict()["factor"] == "2"


def test_alpha_groups_grow_to_maximal_subgraphs():
    ddg = build_ddg(parse_source(corpus_source("two_circles")))
    (group,) = find_duplicates(ddg)
    assert group.kind == ALPHA
    assert [len(c) for c in group.covered] == [2, 2]


def test_rubik_alpha_group_has_three_members():
    ddg = build_ddg(parse_source(corpus_source("rubik")))
    (group,) = find_duplicates(ddg)
    assert group.kind == ALPHA and len(group.members) == 3
    assert group.template == "int(#0 / #1)"


def test_no_duplicates_in_a_plain_program():
    assert find_duplicates(build_ddg(parse_source(DIAMOND))) == []


# ------------------------------------------------------------------ refine


def test_refine_collapses_factor_group(garden):
    result = split_program(garden)
    fn = result.refined.function("compute_plants")
    assert fn is not None and fn.rationale == "duplication_collapse"
    assert "factor" in fn.params
    source = result.source
    assert source.count("compute_plants(") == 3  # the definition and two calls
    assert "compute_plants(circle_area_value, plant_spacing, 2)" in source
    assert "compute_plants(circle_area_value, plant_spacing, 1)" in source


def test_refine_collapses_alpha_group_and_drops_wrappers():
    result = split_program(parse_source(corpus_source("rubik")))
    names = [fn.suggested_name for fn in result.refined.functions]
    assert names.count("compute_along") == 1
    assert not any(name.startswith("along_length_") for name in names)
    assert result.source.count("compute_along(") == 7


def test_refine_isolates_data_processing():
    result = split_program(parse_source(corpus_source("drive_times")))
    stage = [fn for fn in result.refined.functions if fn.rationale == "data_processing"]
    assert len(stage) == 1 and stage[0].suggested_name == "extract_parts"
    assert stage[0].returns == ("count", "total")


def test_refine_collapses_across_goal_and_shared_functions():
    program = parse_source(
        "a = float(input())\nb = float(input())\nx = a * b\ny = b * a\n"
        "c = x + 1\nd = x + 2\ne = y + 3\nprint(c)\nprint(d)\nprint(e)\n"
    )
    result = split_program(program)
    assert result.duplicates and not result.refined.conflicts
    assert program_form(parse_source(result.source)) == program_form(program)


def test_refine_records_conflicts_for_groups_in_main():
    # unused values stay in main, where nothing can be collapsed
    program = parse_source(
        "a = float(input())\nb = float(input())\nx = a * 2\ny = b * 2\nprint(a)\n"
    )
    result = split_program(program)
    assert len(result.duplicates) == 1
    assert any("main" in c for c in result.refined.conflicts)
    assert program_form(parse_source(result.source)) == program_form(program)


def test_refine_without_groups_keeps_the_plan(garden_ddg, garden):
    plan = derive_plan(garden_ddg, color(garden_ddg), garden)
    refined = refine_plan(plan, [], garden_ddg)
    assert refined.to_dict() == plan.to_dict()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_programs_split_into_equivalent_code(seed):
    source = random_dag_program(random.Random(seed))
    program = parse_source(source)
    result = split_program(program)
    kinds = ["num"] * source.count("input()")
    for plan in (result.plan, result.refined):
        emitted = parse_source(emit_refactored_source(plan))
        assert program_form(emitted) == program_form(program)
        assert same_behaviour(program, emitted, kinds, trials=3, seed=seed) is None


def test_shared_chain_does_not_create_call_cycles():
    # each shared value feeds the next; localizing one must not loop back
    program = parse_source(
        "v0 = float(input())\nv1 = v0 * 2\nv2 = v1 - v0\nv3 = v2 + 3\n"
        "print(v3)\nprint(v0, v1)\nprint(v2, v3)\n"
    )
    emitted = parse_source(split_program(program).source)
    assert program_form(emitted) == program_form(program)
