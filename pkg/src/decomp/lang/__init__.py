"""Lexer, parser, semantic checks and printer for the mini-language."""

from .checks import BUILTIN_ARITY, call_graph, check_program
from .lexer import Token, decode_source, tokenize
from .nodes import *  # noqa: F401,F403
from .parser import make_block, parse, parse_source, resolve_reads_writes
from .printer import format_expr, format_stmt, pretty
