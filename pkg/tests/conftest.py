import random

import pytest

from decomp.ddg import build_ddg, run
from decomp.lang import parse_source
from decomp.samples import corpus_source, input_kinds, random_inputs


@pytest.fixture
def garden():
    return parse_source(corpus_source("garden"))


@pytest.fixture
def garden_ddg(garden):
    return build_ddg(garden)


def same_behaviour(original, candidate, kinds, trials=25, seed=0):
    """Run both programs on the same random inputs; return the first mismatch."""
    rng = random.Random(seed)
    for _ in range(trials):
        inputs = random_inputs(kinds, rng)
        a, b = run(original, inputs), run(candidate, inputs)
        if a != b:
            return inputs, a, b
    return None


def program_and_kinds(name):
    source = corpus_source(name)
    return parse_source(source), input_kinds(source)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
