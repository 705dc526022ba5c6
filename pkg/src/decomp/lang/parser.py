"""Recursive-descent parser producing a checked :class:`Program`."""

from __future__ import annotations

from ..errors import ParseError, SemanticError
from . import lexer as lx
from .nodes import (
    Assign,
    BinOp,
    Call,
    Compare,
    CompoundBlock,
    ExprStmt,
    FormatField,
    FStr,
    FunctionDef,
    Num,
    Program,
    Return,
    Span,
    Str,
    UnaryOp,
    Var,
    expr_vars,
    stmt_exprs,
)

_MAX_DEPTH = 100
_AUGMENTED = {"+=": "+", "-=": "-", "*=": "*", "/=": "/"}
_COMPARE = frozenset(["<", "<=", ">", ">=", "==", "!="])


def parse(tokens) -> Program:
    """Parse a token stream from :func:`tokenize` and run semantic checks."""
    from .checks import check_program

    program = Parser(tokens).parse_program()
    check_program(program)
    return program


def parse_source(source) -> Program:
    return parse(lx.tokenize(source))


class Parser:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.pos = 0
        self.depth = 0

    # -- token helpers

    @property
    def tok(self):
        return self.tokens[self.pos]

    def _peek(self, offset=1):
        idx = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[idx]

    def _advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != lx.EOF:
            self.pos += 1
        return tok

    def _at(self, kind, value=None) -> bool:
        tok = self.tok
        return tok.kind == kind and (value is None or tok.value == value)

    def _at_op(self, value) -> bool:
        return self._at(lx.OP, value)

    def _expect(self, kind, value=None, what=None):
        if not self._at(kind, value):
            wanted = what or (repr(value) if value is not None else kind.lower())
            raise ParseError(f"expected {wanted}, found {self._describe(self.tok)}", self.tok.span)
        return self._advance()

    @staticmethod
    def _describe(tok) -> str:
        if tok.kind in (lx.NEWLINE, lx.INDENT, lx.DEDENT, lx.EOF):
            return {"NEWLINE": "end of line", "INDENT": "indent", "DEDENT": "dedent", "EOF": "end of file"}[tok.kind]
        return repr(tok.text or tok.value)

    # -- program structure

    def parse_program(self) -> Program:
        functions = []
        statements = []
        while not self._at(lx.EOF):
            if self._at(lx.INDENT):
                raise ParseError("unexpected indent", self.tok.span)
            if self._at(lx.KEYWORD, "def"):
                functions.append(self._funcdef())
            else:
                statements.append(self._statement())
        return Program(tuple(functions), tuple(statements))

    def _funcdef(self) -> FunctionDef:
        start = self._expect(lx.KEYWORD, "def")
        name = self._expect(lx.IDENT, what="function name")
        self._expect(lx.OP, "(")
        params = []
        if not self._at_op(")"):
            params.append(self._expect(lx.IDENT, what="parameter name").value)
            while self._at_op(","):
                self._advance()
                params.append(self._expect(lx.IDENT, what="parameter name").value)
        self._expect(lx.OP, ")")
        self._expect(lx.OP, ":")
        body = self._block()
        span = Span(start.span.line, start.span.column, len(name.value) + 4)
        return FunctionDef(name.value, tuple(params), body, span)

    def _block(self) -> tuple:
        self._expect(lx.NEWLINE, what="end of line after ':'")
        self._expect(lx.INDENT, what="an indented block")
        body = []
        while not self._at(lx.DEDENT) and not self._at(lx.EOF):
            if self._at(lx.KEYWORD, "def"):
                raise SemanticError("nested function definitions are not supported", self.tok.span)
            body.append(self._statement())
        self._expect(lx.DEDENT, what="dedent")
        return tuple(body)

    # -- statements

    def _statement(self):
        tok = self.tok
        if tok.kind == lx.KEYWORD:
            if tok.value == "return":
                return self._return()
            if tok.value == "if":
                return self._if()
            if tok.value == "while":
                return self._while()
            if tok.value == "for":
                return self._for()
            raise ParseError(f"unexpected keyword {tok.value!r}", tok.span)
        if tok.kind in (lx.NEWLINE, lx.INDENT, lx.DEDENT, lx.EOF):
            raise ParseError(f"expected a statement, found {self._describe(tok)}", tok.span)
        return self._simple_statement()

    def _return(self) -> Return:
        start = self._advance()
        values = ()
        if not self._at(lx.NEWLINE):
            values = self._expr_list()
        self._expect(lx.NEWLINE, what="end of line")
        return Return(values, start.span)

    def _simple_statement(self):
        start = self.tok
        exprs = self._expr_list()
        if self._at(lx.OP) and self.tok.value in _AUGMENTED:
            op_tok = self._advance()
            if len(exprs) != 1 or not isinstance(exprs[0], Var):
                raise ParseError("augmented assignment needs a single variable target", op_tok.span)
            value = self._expr()
            self._expect(lx.NEWLINE, what="end of line")
            target = exprs[0]
            expr = BinOp(_AUGMENTED[op_tok.value], Var(target.name, target.span), value, op_tok.span)
            return Assign((target.name,), (expr,), start.span)
        if self._at_op("="):
            eq = self._advance()
            for target in exprs:
                if not isinstance(target, Var):
                    raise ParseError("can only assign to variable names", target.span or eq.span)
            names = [t.name for t in exprs]
            if len(set(names)) != len(names):
                raise ParseError("duplicate target in assignment", eq.span)
            values = self._expr_list()
            if self._at_op("="):
                raise ParseError("chained assignment is not supported", self.tok.span)
            if len(values) != len(names) and len(values) != 1:
                raise ParseError(
                    f"{len(names)} targets but {len(values)} values", eq.span
                )
            self._expect(lx.NEWLINE, what="end of line")
            return Assign(tuple(names), values, start.span)
        if len(exprs) != 1:
            raise ParseError("expected '=' after a list of expressions", self.tok.span)
        self._expect(lx.NEWLINE, what="end of line")
        return ExprStmt(exprs[0], start.span)

    def _if(self) -> CompoundBlock:
        start = self._advance()
        test = self._expr()
        self._expect(lx.OP, ":")
        body = self._block()
        orelse = ()
        if self._at(lx.KEYWORD, "elif"):
            orelse = (self._if(),)
        elif self._at(lx.KEYWORD, "else"):
            self._advance()
            self._expect(lx.OP, ":")
            orelse = self._block()
        return make_block("if", body, orelse, test=test, span=start.span)

    def _while(self) -> CompoundBlock:
        start = self._advance()
        test = self._expr()
        self._expect(lx.OP, ":")
        body = self._block()
        return make_block("while", body, test=test, span=start.span)

    def _for(self) -> CompoundBlock:
        start = self._advance()
        target = self._expect(lx.IDENT, what="loop variable").value
        self._expect(lx.KEYWORD, "in")
        it = self._expr()
        self._expect(lx.OP, ":")
        body = self._block()
        return make_block("for", body, target=target, iter=it, span=start.span)

    # -- expressions

    def _expr_list(self) -> tuple:
        items = [self._expr()]
        while self._at_op(","):
            self._advance()
            items.append(self._expr())
        return tuple(items)

    def _expr(self):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.tok.span)
        try:
            return self._comparison()
        finally:
            self.depth -= 1

    def _comparison(self):
        left = self._arith()
        if self._at(lx.OP) and self.tok.value in _COMPARE:
            op = self._advance()
            right = self._arith()
            if self._at(lx.OP) and self.tok.value in _COMPARE:
                raise ParseError("chained comparisons are not supported", self.tok.span)
            return Compare(op.value, left, right, op.span)
        if self._at(lx.KEYWORD) and self.tok.value in ("and", "or", "not", "in"):
            raise ParseError(f"operator {self.tok.value!r} is not supported", self.tok.span)
        return left

    def _arith(self):
        left = self._term()
        while self._at(lx.OP) and self.tok.value in ("+", "-"):
            op = self._advance()
            left = BinOp(op.value, left, self._term(), op.span)
        return left

    def _term(self):
        left = self._unary()
        while self._at(lx.OP) and self.tok.value in ("*", "/", "//", "%"):
            op = self._advance()
            left = BinOp(op.value, left, self._unary(), op.span)
        return left

    def _unary(self):
        if self._at_op("-"):
            op = self._advance()
            self.depth += 1
            if self.depth > _MAX_DEPTH:
                raise ParseError("expression nested too deeply", op.span)
            try:
                return UnaryOp("-", self._unary(), op.span)
            finally:
                self.depth -= 1
        if self._at_op("+"):
            raise ParseError("unary '+' is not supported", self.tok.span)
        return self._power()

    def _power(self):
        base = self._postfix()
        if self._at_op("**"):
            op = self._advance()
            return BinOp("**", base, self._unary(), op.span)
        return base

    def _postfix(self):
        expr = self._atom()
        while self._at_op("."):
            dot = self._advance()
            name = self._expect(lx.IDENT, what="method name")
            if not self._at_op("("):
                raise ParseError("attribute access is not supported", dot.span)
            args = self._call_args()
            expr = Call(name.value, (expr,) + args, True, name.span)
        return expr

    def _call_args(self) -> tuple:
        self._expect(lx.OP, "(")
        args = []
        if not self._at_op(")"):
            args.append(self._expr())
            while self._at_op(","):
                self._advance()
                args.append(self._expr())
        self._expect(lx.OP, ")")
        return tuple(args)

    def _atom(self):
        tok = self.tok
        if tok.kind == lx.NUM:
            self._advance()
            return Num(tok.value, tok.text, tok.span)
        if tok.kind == lx.STR:
            self._advance()
            return Str(tok.value, tok.span)
        if tok.kind == lx.FSTR:
            self._advance()
            return self._fstring(tok)
        if tok.kind == lx.IDENT:
            self._advance()
            if self._at_op("("):
                return Call(tok.value, self._call_args(), False, tok.span)
            return Var(tok.value, tok.span)
        if self._at_op("("):
            self._advance()
            inner = self._expr()
            if self._at_op(","):
                raise ParseError("tuples are not supported", self.tok.span)
            self._expect(lx.OP, ")")
            return inner
        raise ParseError(f"expected an expression, found {self._describe(tok)}", tok.span)

    def _fstring(self, tok) -> FStr:
        text = tok.value
        parts = []
        buf = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch == "{":
                if i + 1 < n and text[i + 1] == "{":
                    buf.append("{")
                    i += 2
                    continue
                close = text.find("}", i)
                if close < 0:
                    raise ParseError("unterminated '{' in f-string", tok.span)
                field = text[i + 1 : close]
                spec = ""
                if ":" in field:
                    field, spec = field.split(":", 1)
                if not field.strip():
                    raise ParseError("empty expression in f-string", tok.span)
                if buf:
                    parts.append("".join(buf))
                    buf = []
                parts.append(FormatField(self._sub_expr(field, tok), spec))
                i = close + 1
                continue
            if ch == "}":
                if i + 1 < n and text[i + 1] == "}":
                    buf.append("}")
                    i += 2
                    continue
                raise ParseError("single '}' in f-string", tok.span)
            buf.append(ch)
            i += 1
        if buf:
            parts.append("".join(buf))
        return FStr(tuple(parts), tok.span)

    def _sub_expr(self, text, tok):
        try:
            inner = lx.tokenize(text)
        except Exception as exc:  # re-anchor nested lexer errors on the f-string
            raise ParseError(f"bad f-string expression: {exc}", tok.span) from None
        # only an expression followed by NEWLINE EOF is acceptable
        sub = Parser(inner)
        sub.depth = self.depth
        if sub._at(lx.INDENT):
            raise ParseError("bad f-string expression", tok.span)
        expr = sub._expr()
        if not (sub._at(lx.NEWLINE) and sub._peek().kind == lx.EOF):
            raise ParseError("bad f-string expression", tok.span)
        return _respan(expr, tok.span)


def _respan(expr, span):
    """Attach the f-string's own span to an expression parsed from inside it."""
    from dataclasses import fields, replace

    changes = {}
    for f in fields(expr):
        value = getattr(expr, f.name)
        if f.name == "span":
            changes["span"] = span
        elif isinstance(value, tuple):
            changes[f.name] = tuple(
                _respan(v, span) if hasattr(v, "__dataclass_fields__") and not isinstance(v, FormatField) else v
                for v in value
            )
        elif hasattr(value, "__dataclass_fields__"):
            changes[f.name] = _respan(value, span)
    return replace(expr, **changes)


def make_block(kind, body, orelse=(), *, test=None, target=None, iter=None, span=None):
    """Build a :class:`CompoundBlock` with its read and write sets filled in."""
    used = []
    defined = []
    for expr in (test, iter):
        if expr is not None:
            used.extend(expr_vars(expr))
    for stmt in tuple(body) + tuple(orelse):
        reads, writes = _stmt_reads_writes(stmt)
        used.extend(reads)
        defined.extend(writes)
    used_set = frozenset(used) - {target}
    defined_set = frozenset(defined) - {target}
    return CompoundBlock(
        kind,
        tuple(body),
        tuple(orelse),
        test=test,
        target=target,
        iter=iter,
        used_vars=used_set,
        defined_vars=defined_set,
        span=span,
    )


def _stmt_reads_writes(stmt):
    if isinstance(stmt, CompoundBlock):
        reads = set(stmt.used_vars)
        for expr in stmt_exprs(stmt):
            reads.update(expr_vars(expr))
        return reads, set(stmt.defined_vars)
    reads = set()
    for expr in stmt_exprs(stmt):
        reads.update(expr_vars(expr))
    writes = set(stmt.targets) if isinstance(stmt, Assign) else set()
    return reads, writes


def resolve_reads_writes(stmt):
    """Return ``(reads, writes)`` as frozensets of variable names.

    Purely syntactic. Blocks report their recorded sets plus the variables
    in their header.
    """
    reads, writes = _stmt_reads_writes(stmt)
    if isinstance(stmt, CompoundBlock) and stmt.target is not None:
        reads.discard(stmt.target)
    return frozenset(reads), frozenset(writes)
