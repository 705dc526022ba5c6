"""Tokenizer with Python-style INDENT/DEDENT handling."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import LexError
from .nodes import Span

KEYWORDS = frozenset(
    ["def", "return", "if", "elif", "else", "while", "for", "in", "and", "or", "not", "pass"]
)

IDENT = "IDENT"
KEYWORD = "KEYWORD"
NUM = "NUM"
STR = "STR"
FSTR = "FSTR"
OP = "OP"
NEWLINE = "NEWLINE"
INDENT = "INDENT"
DEDENT = "DEDENT"
EOF = "EOF"

# longest first so that "**" wins over "*"
OPERATORS = (
    "**", "//", "<=", ">=", "==", "!=", "+=", "-=", "*=", "/=",
    "+", "-", "*", "/", "%", "<", ">", "=", "(", ")", ",", ":", ".",
)

_NUMBER = re.compile(r"([0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)([eE][+-]?[0-9]+)?")
_DIGITS = frozenset("0123456789")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"', "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: Union[str, int, float, None]
    span: Span
    text: str = ""

    def __repr__(self) -> str:
        return f"{self.kind}({self.value!r})"


def decode_source(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise LexError(f"source is not valid UTF-8 (byte {exc.start})", Span(1, 1)) from None


def tokenize(source) -> list:
    """Turn source text (or UTF-8 bytes) into a list of tokens ending in EOF."""
    if isinstance(source, (bytes, bytearray)):
        source = decode_source(bytes(source))
    source = source.replace("\r\n", "\n").replace("\r", "\n")
    lines = source.split("\n")
    tokens: list = []
    indents = [""]
    depth = 0  # bracket nesting; newlines inside brackets are ignored

    for lineno, line in enumerate(lines, start=1):
        pos = 0
        if depth == 0:
            stripped = line.lstrip(" \t")
            if not stripped or stripped.startswith("#"):
                continue
            lead = line[: len(line) - len(stripped)]
            if " " in lead and "\t" in lead:
                raise LexError("indentation mixes tabs and spaces", Span(lineno, 1, len(lead)))
            _indent(tokens, indents, lead, lineno)
            pos = len(lead)

        n = len(line)
        while pos < n:
            ch = line[pos]
            col = pos + 1
            if ch in " \t":
                pos += 1
                continue
            if ch == "#":
                break
            if ch in _DIGITS or (ch == "." and pos + 1 < n and line[pos + 1] in _DIGITS):
                m = _NUMBER.match(line, pos)
                text = m.group(0)
                end = m.end()
                if end < n and (line[end].isalnum() or line[end] == "_"):
                    raise LexError(f"malformed number {line[pos:end + 1]!r}", Span(lineno, col))
                value = int(text) if text.isdecimal() else float(text)
                tokens.append(Token(NUM, value, Span(lineno, col, len(text)), text))
                pos = end
                continue
            if ch in "fF" and pos + 1 < n and line[pos + 1] in "'\"":
                value, end = _read_string(line, pos + 1, lineno, col)
                tokens.append(Token(FSTR, value, Span(lineno, col, end - pos), line[pos:end]))
                pos = end
                continue
            if ch.isalpha() or ch == "_":
                m = _IDENT.match(line, pos)
                if m is None:
                    raise LexError(f"illegal character {ch!r}", Span(lineno, col))
                word = m.group(0)
                kind = KEYWORD if word in KEYWORDS else IDENT
                tokens.append(Token(kind, word, Span(lineno, col, len(word)), word))
                pos = m.end()
                continue
            if ch in "'\"":
                value, end = _read_string(line, pos, lineno, col)
                tokens.append(Token(STR, value, Span(lineno, col, end - pos), line[pos:end]))
                pos = end
                continue
            for op in OPERATORS:
                if line.startswith(op, pos):
                    if op == "(":
                        depth += 1
                    elif op == ")":
                        if depth == 0:
                            raise LexError("unbalanced ')'", Span(lineno, col))
                        depth -= 1
                    tokens.append(Token(OP, op, Span(lineno, col, len(op)), op))
                    pos += len(op)
                    break
            else:
                raise LexError(f"illegal character {ch!r}", Span(lineno, col))
        if depth == 0 and tokens and tokens[-1].kind not in (NEWLINE, INDENT, DEDENT):
            tokens.append(Token(NEWLINE, None, Span(lineno, len(line) + 1, 0)))

    last = len(lines)
    if depth:
        raise LexError("unclosed '(' at end of file", Span(last, 1))
    if tokens and tokens[-1].kind not in (NEWLINE, DEDENT):
        tokens.append(Token(NEWLINE, None, Span(last, 1, 0)))
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token(DEDENT, None, Span(last, 1, 0)))
    tokens.append(Token(EOF, None, Span(last, 1, 0)))
    return tokens


def _indent(tokens, indents, lead, lineno):
    current = indents[-1]
    if lead == current:
        return
    if lead.startswith(current):
        indents.append(lead)
        tokens.append(Token(INDENT, None, Span(lineno, 1, len(lead))))
        return
    if lead in indents:
        while indents[-1] != lead:
            indents.pop()
            tokens.append(Token(DEDENT, None, Span(lineno, 1, len(lead))))
        return
    raise LexError("inconsistent indentation", Span(lineno, 1, max(len(lead), 1)))


def _read_string(line, start, lineno, col):
    quote = line[start]
    out = []
    pos = start + 1
    n = len(line)
    while pos < n:
        ch = line[pos]
        if ch == quote:
            return "".join(out), pos + 1
        if ch == "\\":
            if pos + 1 >= n:
                break
            nxt = line[pos + 1]
            if nxt not in _ESCAPES:
                raise LexError(f"unknown escape \\{nxt}", Span(lineno, pos + 1, 2))
            out.append(_ESCAPES[nxt])
            pos += 2
            continue
        out.append(ch)
        pos += 1
    raise LexError("unterminated string", Span(lineno, col, n - col + 1))
