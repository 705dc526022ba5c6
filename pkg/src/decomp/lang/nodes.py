"""AST node types for the procedural mini-language.

Every node is a frozen dataclass. Source spans never take part in
equality, so two parses of differently formatted text compare equal when
their structure matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

BUILTINS = frozenset(
    ["print", "input", "int", "float", "str", "len", "abs", "round", "split", "range"]
)
CASTS = frozenset(["int", "float", "str"])
BINARY_OPS = ("+", "-", "*", "/", "//", "%", "**")
COMPARE_OPS = ("<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    length: int = 1

    def to_dict(self) -> dict:
        return {"line": self.line, "col": self.column, "length": self.length}


def _span():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Num:
    value: Union[int, float]
    text: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Str:
    value: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    # written as ``args[0].name(args[1:])``; only affects printing
    method: bool = False
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class FormatField:
    expr: "Expr"
    spec: str = ""


@dataclass(frozen=True)
class FStr:
    """An f-string; ``parts`` mixes literal text with :class:`FormatField`."""

    parts: tuple
    span: Optional[Span] = _span()


Expr = Union[Num, Str, Var, UnaryOp, BinOp, Compare, Call, FStr]


# ----------------------------------------------------------------- statements


@dataclass(frozen=True)
class Assign:
    targets: tuple
    values: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Return:
    values: tuple
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class CompoundBlock:
    """An ``if``/``while``/``for`` statement treated as one opaque unit.

    ``test`` is the condition of ``if``/``while``; ``target`` and ``iter``
    describe a ``for`` header. ``used_vars`` and ``defined_vars`` hold every
    variable read or written anywhere inside, the loop target excluded (it
    is local to the block).
    """

    kind: str
    body: tuple
    orelse: tuple = ()
    test: Optional[Expr] = None
    target: Optional[str] = None
    iter: Optional[Expr] = None
    used_vars: frozenset = field(default=frozenset(), compare=False)
    defined_vars: frozenset = field(default=frozenset(), compare=False)
    span: Optional[Span] = _span()


Stmt = Union[Assign, ExprStmt, Return, CompoundBlock]


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: tuple
    body: tuple
    span: Optional[Span] = _span()

    @property
    def return_arity(self) -> int:
        for stmt in self.body:
            if isinstance(stmt, Return):
                return len(stmt.values)
        return 0


@dataclass(frozen=True)
class Program:
    functions: tuple = ()
    global_statements: tuple = ()

    def function(self, name: str) -> Optional[FunctionDef]:
        for fn in self.functions:
            if fn.name == name:
                return fn
        return None

    @property
    def function_names(self) -> frozenset:
        return frozenset(fn.name for fn in self.functions)


# -------------------------------------------------------------------- walkers


def iter_subexprs(expr):
    """Yield ``expr`` and every expression nested in it, pre-order."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, UnaryOp):
            stack.append(node.operand)
        elif isinstance(node, (BinOp, Compare)):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Call):
            stack.extend(reversed(node.args))
        elif isinstance(node, FStr):
            stack.extend(
                part.expr for part in reversed(node.parts) if isinstance(part, FormatField)
            )


def expr_vars(expr) -> list:
    """Variable names read by ``expr``, in first-occurrence order."""
    seen = []
    for node in iter_subexprs(expr):
        if isinstance(node, Var) and node.name not in seen:
            seen.append(node.name)
    return seen


def expr_calls(expr) -> list:
    return [node for node in iter_subexprs(expr) if isinstance(node, Call)]


def stmt_exprs(stmt) -> list:
    """Expressions that appear directly in ``stmt`` (not in nested bodies)."""
    if isinstance(stmt, Assign):
        return list(stmt.values)
    if isinstance(stmt, ExprStmt):
        return [stmt.expr]
    if isinstance(stmt, Return):
        return list(stmt.values)
    if isinstance(stmt, CompoundBlock):
        return [e for e in (stmt.test, stmt.iter) if e is not None]
    return []


def iter_stmts(stmts):
    """Yield every statement in ``stmts``, descending into block bodies."""
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, CompoundBlock):
            yield from iter_stmts(stmt.body)
            yield from iter_stmts(stmt.orelse)


def is_print(stmt) -> bool:
    return (
        isinstance(stmt, ExprStmt)
        and isinstance(stmt.expr, Call)
        and stmt.expr.name == "print"
    )


def contains_print(stmt) -> bool:
    for inner in iter_stmts([stmt]):
        for expr in stmt_exprs(inner):
            if any(call.name == "print" for call in expr_calls(expr)):
                return True
    return False


def contains_call(stmt, name: str) -> bool:
    for inner in iter_stmts([stmt]):
        for expr in stmt_exprs(inner):
            if any(call.name == name for call in expr_calls(expr)):
                return True
    return False
