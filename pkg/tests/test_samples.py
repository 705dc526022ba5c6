import random

import pytest

from decomp.lang import parse_source
from decomp.samples import (
    corpus_files,
    input_kinds,
    random_value,
    synthetic_submissions,
    undecomposed_files,
    write_synthetic_corpus,
)


def test_corpus_size_and_headers():
    assert len(undecomposed_files()) >= 10
    for path in undecomposed_files():
        parse_source(path.read_text())
    assert input_kinds("# inputs: num int*\n")[:2] == ["num", "int"]
    assert len(input_kinds("# inputs: num int*\n")) == 11
    assert input_kinds("x = 1\n") == []


def test_input_values():
    rng = random.Random(1)
    assert float(random_value("num", rng)) > 0
    assert 0 <= int(random_value("int", rng)) <= 10
    assert all(part.isdigit() for part in random_value("words", rng).split())
    with pytest.raises(ValueError):
        random_value("date", rng)


def test_synthetic_corpus_is_deterministic(tmp_path):
    a = synthetic_submissions()
    assert len(a) == 37 and a == synthetic_submissions()
    paths = write_synthetic_corpus(tmp_path)
    assert len(paths) == 37
    failures = 0
    for text in a.values():
        try:
            parse_source(text)
        except Exception:
            failures += 1
    assert 0 < failures < 37


def test_every_corpus_file_is_listed():
    assert {p.stem for p in corpus_files()} >= {"garden", "garden_ex1", "garden_ex2", "garden_reference"}
