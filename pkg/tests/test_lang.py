import pytest
from hypothesis import given, settings, strategies as st

from decomp.errors import DecompError, LexError, ParseError, SemanticError
from decomp.lang import (
    Assign,
    BinOp,
    CompoundBlock,
    call_graph,
    format_expr,
    parse_source,
    pretty,
    tokenize,
)
from decomp.lang.rewrite import rename_expr, statement_names
from decomp.samples import corpus_files


def test_tokens_end_with_eof_and_track_indentation():
    kinds = [t.kind for t in tokenize("if x:\n    y = 1\n")]
    assert kinds[-1] == "EOF"
    assert "INDENT" in kinds and "DEDENT" in kinds


def test_minimal_token_streams():
    assert [t.kind for t in tokenize("x = 3")][:3] == ["IDENT", "OP", "NUM"]
    tokens = tokenize("circle_area = pi * r ** 2")
    assert len([t for t in tokens if t.kind not in ("NEWLINE", "EOF")]) == 7
    assert tokens[6].value == 2


def test_crlf_line_endings():
    assert parse_source("x = 1\r\nprint(x)\r\n") == parse_source("x = 1\nprint(x)\n")


def test_double_star_is_one_token():
    ops = [t.value for t in tokenize("a ** b\n") if t.kind == "OP"]
    assert ops == ["**"]


def test_precedence_and_right_associative_power():
    stmt = parse_source("a = 1\nb = 2\nx = a + b * 2 ** 3 ** 2\n").global_statements[2]
    assert isinstance(stmt, Assign)
    assert format_expr(stmt.values[0]) == "a + b * 2 ** 3 ** 2"
    expr = stmt.values[0]
    assert isinstance(expr, BinOp) and expr.op == "+"
    power = expr.right.right
    assert power.op == "**" and power.right.op == "**"


def test_compound_blocks_record_reads_and_writes():
    program = parse_source(
        "n = 3\ntotal = 0\nfor k in range(n):\n    total = total + k\nprint(total)\n"
    )
    block = program.global_statements[2]
    assert isinstance(block, CompoundBlock) and block.kind == "for"
    assert "total" in block.defined_vars
    assert {"n", "total"} <= block.used_vars
    assert "k" not in block.defined_vars


def test_augmented_assignment_and_fstrings_round_trip():
    source = 'x = 1\nx += 2\nname = "a"\nprint(f"{name}: {x}")\n'
    program = parse_source(source)
    assert parse_source(pretty(program)) == program


@pytest.mark.parametrize(
    "source, error, line",
    [
        ("x = 'abc\n", LexError, 1),
        ("x = 3 $ 4\n", LexError, 1),
        ("x = 1 +\n", ParseError, 1),
        ("x = 1\n  y = 2\n", ParseError, 2),
        ("if 1:\nprint(2)\n", ParseError, 2),
        ("print(y)\n", SemanticError, 1),
        ("def f(a):\n    return a\nprint(f(1, 2))\n", SemanticError, 3),
        ("def f():\n    f()\nf()\n", SemanticError, 1),
        ("s = 'a'\nprint(s.upper())\n", SemanticError, 2),
        ("if 1:\n \tx = 1\n", LexError, 2),
        ("def f():\n    return 1\ndef f():\n    return 2\n", SemanticError, 3),
        ("def f():\n    def g():\n        return 1\n    return 2\n", SemanticError, 2),
        ("def f(x):\n    if x > 1:\n        return 1, 2\n    return 1\n", SemanticError, 4),
        ("def f(a, a):\n    return a\n", SemanticError, 1),
        ("def f():\n    return g()\ndef g():\n    return f()\n", SemanticError, 1),
    ],
)
def test_errors_carry_spans(source, error, line):
    with pytest.raises(error) as info:
        parse_source(source)
    assert info.value.span is not None
    assert info.value.span.line == line


def test_invalid_utf8_is_a_lex_error():
    with pytest.raises(LexError):
        tokenize(b"x = '\xff'\n")


def test_call_graph_lists_user_callees():
    program = parse_source(
        "def a():\n    return 1\n\ndef b():\n    x = a()\n    print(x)\n\nb()\n"
    )
    assert call_graph(program) == {"a": [], "b": ["a"]}


def test_rename_expr_and_statement_names():
    stmt = parse_source("a = 1\nb = a * a\n").global_statements[1]
    renamed = rename_expr(stmt.values[0], {"a": "z"})
    assert format_expr(renamed) == "z * z"
    assert statement_names(parse_source("a = 1\nb = a\n").global_statements) == {"a", "b"}


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_corpus_round_trips_through_printer(path):
    program = parse_source(path.read_text())
    assert parse_source(pretty(program)) == program


_names = st.sampled_from(["a", "b", "c"])
_exprs = st.recursive(
    st.one_of(_names, st.integers(0, 99).map(str)),
    lambda inner: st.tuples(inner, st.sampled_from(["+", "-", "*", "/", "**", "%"]), inner).map(
        lambda t: f"({t[0]} {t[1]} {t[2]})"
    ),
    max_leaves=8,
)


@settings(max_examples=150, deadline=None)
@given(_exprs)
def test_printed_expressions_reparse_to_the_same_tree(text):
    program = parse_source(f"a = 1\nb = 2\nc = 3\nx = {text}\n")
    assert parse_source(pretty(program)) == program


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="ab=+*()\n :#'\"0123456789ifdefprint", max_size=60))
def test_parser_raises_only_structured_errors(text):
    try:
        parse_source(text)
    except DecompError as exc:
        assert str(exc)
