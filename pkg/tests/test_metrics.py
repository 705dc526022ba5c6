from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from decomp.errors import WeightError
from decomp.lang import parse_source
from decomp.metrics import (
    Measurements,
    compare,
    flag_findings,
    lower_is_better,
    measure,
    reuse_score,
    score_programs,
)
from decomp.samples import corpus_source


def program(name):
    return parse_source(corpus_source(name))


def counts(g=0, s=0, i=0, r=0):
    return Measurements(g, s, i, r)


def test_reference_measurements():
    m = measure(program("garden_reference"))
    assert m.values() == (0, 0, 8, 1)
    assert m.reused == ("circle_area",)
    assert m.per_function["circle_area"].level == 0
    assert m.per_function["plants"].level == 1
    assert m.per_function["main"].level == 2


def test_fully_global_program():
    garden = program("garden")
    m = measure(garden)
    assert m.srp_violations == 0 and m.info_load == 0 and m.reuse_instances == 0
    assert m.global_volume == len(garden.global_statements) == 15


def test_global_volume_skips_defs_and_trailing_main_call():
    p = parse_source("def main():\n    print(1)\n\nx = 2\nmain()\n")
    assert measure(p).global_volume == 1


def test_global_volume_counts_nested_statements():
    p = parse_source("x = 1\nif x > 0:\n    x = 2\n    print(x)\n")
    assert measure(p).global_volume == 4


def test_garden_ex1_has_an_srp_violation():
    m = measure(program("garden_ex1"))
    assert m.srp_violations == 1
    assert m.per_function["plants"].prints and m.per_function["plants"].returns == 1


def test_prints_inside_blocks_count():
    p = parse_source("def f(x):\n    if x > 1:\n        print(x)\n    return x\n\nprint(f(2))\n")
    assert measure(p).srp_violations == 1


def test_main_is_never_an_srp_violation_or_reused():
    p = parse_source("def main():\n    print(1)\n    return 2\n\nx = main()\n")
    m = measure(p)
    assert m.srp_violations == 0 and m.reuse_instances == 0


def test_reuse_needs_two_distinct_callers():
    once = parse_source(
        "def h(x):\n    return x + 1\n\ndef a(x):\n    print(h(x))\n    print(h(x))\n\na(1)\n"
    )
    assert measure(once).reuse_instances == 0
    twice = parse_source(
        "def h(x):\n    return x + 1\n\ndef a(x):\n    print(h(x))\n\n"
        "def b(x):\n    print(h(x))\n\ndef main():\n    a(1)\n    b(2)\n\nmain()\n"
    )
    assert measure(twice).reuse_instances == 1


def test_measure_ignores_names():
    a = measure(program("garden_reference"))
    renamed = corpus_source("garden_reference").replace("area", "value")
    b = measure(parse_source(renamed))
    assert a.values() == b.values()


def test_formulas():
    assert lower_is_better(1, 0) == 0.5
    assert lower_is_better(0, 3) == 1.0
    assert lower_is_better(8, 3) == pytest.approx(Fraction(4, 9))
    assert reuse_score(0, 0) == 1.0
    assert reuse_score(1, 2) == 0.5
    assert reuse_score(5, 2) == 1.0


def test_self_comparison_is_exactly_one():
    m = measure(program("garden_reference"))
    report = compare(m, m)
    assert report.subscores == (1.0, 1.0, 1.0, 1.0)
    assert report.composite == 1.0


def test_garden_ex1_scores_half_on_srp():
    report = score_programs(program("garden_ex1"), program("garden_reference"))
    assert report.subscores[1] == 0.5
    assert report.equivalent


def test_garden_ex2_passes_more_information():
    report = score_programs(program("garden_ex2"), program("garden_reference"))
    assert report.candidate.info_load > report.reference.info_load
    assert report.subscores[2] < 1
    assert report.equivalent


def test_nonequivalent_submission_carries_a_warning():
    wrong = corpus_source("garden_reference").replace("/ 27", "/ 9", 1)
    report = score_programs(parse_source(wrong), program("garden_reference"))
    assert not report.equivalent and report.warnings


@pytest.mark.parametrize("weights", [(0, 0, 0, 0), (1, -1, 1, 1), (1, 1, 1)])
def test_bad_weights(weights):
    with pytest.raises(WeightError):
        compare(counts(), counts(), weights)


def test_weights_change_the_composite():
    report = compare(counts(s=1), counts(), weights=(0, 1, 0, 0))
    assert report.composite == 0.5


_count = st.integers(0, 50)


@given(_count, _count, _count, _count, _count, _count, _count, _count)
def test_scores_are_bounded_and_one_only_at_parity(g, s, i, r, rg, rs, ri, rr):
    report = compare(counts(g, s, i, r), counts(rg, rs, ri, rr))
    assert all(0 <= x <= 1 for x in report.subscores)
    assert 0 <= report.composite <= 1
    assert (report.composite == 1) == all(x == 1 for x in report.subscores)


@given(_count, _count, st.integers(1, 10))
def test_lower_is_better_is_monotone(cand, ref, step):
    assert lower_is_better(cand + step, ref) <= lower_is_better(cand, ref)


def test_findings():
    ex1 = program("garden_ex1")
    findings = flag_findings(ex1, reference=measure(program("garden_reference")))
    srp = [f for f in findings if f.metric == "srp_violations"]
    assert len(srp) == 1 and srp[0].span.line == 2 and "plants" in srp[0].message
    assert [f.metric for f in findings].count("reuse_instances") == 1


def test_parameter_threshold_finding():
    p = parse_source("def f(a, b, c, d, e):\n    print(a + b + c + d + e)\n\nf(1, 2, 3, 4, 5)\n")
    assert [f.metric for f in flag_findings(p)] == ["info_load"]
    assert flag_findings(p, param_threshold=5) == []


def test_global_statements_are_findings():
    findings = flag_findings(program("garden"))
    assert len(findings) == 15 and {f.metric for f in findings} == {"global_volume"}


def test_optimal_solution_has_no_findings_against_itself():
    ref = program("garden_reference")
    assert flag_findings(ref, reference=measure(ref)) == []
