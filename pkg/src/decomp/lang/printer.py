"""Pretty-printer: turns AST nodes back into canonical source text."""

from __future__ import annotations

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
    Str,
    UnaryOp,
    Var,
)

INDENT = "    "

# higher binds tighter
_PREC = {"cmp": 1, "+": 2, "-": 2, "*": 3, "/": 3, "//": 3, "%": 3, "neg": 4, "**": 5, "atom": 6}


def _prec(expr) -> int:
    if isinstance(expr, Compare):
        return _PREC["cmp"]
    if isinstance(expr, BinOp):
        return _PREC[expr.op]
    if isinstance(expr, UnaryOp):
        return _PREC["neg"]
    return _PREC["atom"]


def quote(text: str, q: str = '"') -> str:
    out = text.replace("\\", "\\\\").replace("\n", "\\n").replace("\t", "\\t").replace("\0", "\\0")
    return q + out.replace(q, "\\" + q) + q


def format_expr(expr, q: str = '"') -> str:
    if isinstance(expr, Num):
        return expr.text
    if isinstance(expr, Str):
        return quote(expr.value, q)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, FStr):
        return _format_fstr(expr)
    if isinstance(expr, Call):
        if expr.method:
            obj = _wrap(expr.args[0], _PREC["atom"], q)
            if isinstance(expr.args[0], Num):
                obj = f"({obj})"
            rest = ", ".join(format_expr(a, q) for a in expr.args[1:])
            return f"{obj}.{expr.name}({rest})"
        return f"{expr.name}({', '.join(format_expr(a, q) for a in expr.args)})"
    if isinstance(expr, UnaryOp):
        return "-" + _wrap(expr.operand, _PREC["neg"], q)
    if isinstance(expr, Compare):
        left = _wrap(expr.left, _PREC["cmp"] + 1, q)
        right = _wrap(expr.right, _PREC["cmp"] + 1, q)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, BinOp):
        prec = _PREC[expr.op]
        if expr.op == "**":
            # right-associative; a unary operand on the left needs parens
            left = _wrap(expr.left, prec + 1, q)
            right = _wrap(expr.right, _PREC["neg"], q)
        else:
            left = _wrap(expr.left, prec, q)
            right = _wrap(expr.right, prec + 1, q)
        return f"{left} {expr.op} {right}"
    raise TypeError(f"not an expression: {expr!r}")


def _wrap(expr, min_prec, q) -> str:
    text = format_expr(expr, q)
    if _prec(expr) < min_prec:
        return f"({text})"
    return text


def _format_fstr(expr: FStr) -> str:
    out = []
    for part in expr.parts:
        if isinstance(part, FormatField):
            inner = format_expr(part.expr, "'")
            spec = f":{part.spec}" if part.spec else ""
            out.append("{" + inner + spec + "}")
        else:
            text = quote(part)[1:-1]
            out.append(text.replace("{", "{{").replace("}", "}}"))
    return 'f"' + "".join(out) + '"'


def format_stmt(stmt, level: int = 0) -> list:
    pad = INDENT * level
    if isinstance(stmt, Assign):
        targets = ", ".join(stmt.targets)
        values = ", ".join(format_expr(v) for v in stmt.values)
        return [f"{pad}{targets} = {values}"]
    if isinstance(stmt, ExprStmt):
        return [pad + format_expr(stmt.expr)]
    if isinstance(stmt, Return):
        if not stmt.values:
            return [pad + "return"]
        return [pad + "return " + ", ".join(format_expr(v) for v in stmt.values)]
    if isinstance(stmt, CompoundBlock):
        return _format_block(stmt, level, "if")
    raise TypeError(f"not a statement: {stmt!r}")


def _format_block(stmt: CompoundBlock, level: int, keyword: str) -> list:
    pad = INDENT * level
    if stmt.kind == "for":
        lines = [f"{pad}for {stmt.target} in {format_expr(stmt.iter)}:"]
    elif stmt.kind == "while":
        lines = [f"{pad}while {format_expr(stmt.test)}:"]
    else:
        lines = [f"{pad}{keyword} {format_expr(stmt.test)}:"]
    for inner in stmt.body:
        lines.extend(format_stmt(inner, level + 1))
    if stmt.orelse:
        only = stmt.orelse[0]
        if len(stmt.orelse) == 1 and isinstance(only, CompoundBlock) and only.kind == "if":
            lines.extend(_format_block(only, level, "elif"))
        else:
            lines.append(f"{pad}else:")
            for inner in stmt.orelse:
                lines.extend(format_stmt(inner, level + 1))
    return lines


def format_function(fn: FunctionDef) -> list:
    lines = [f"def {fn.name}({', '.join(fn.params)}):"]
    for stmt in fn.body:
        lines.extend(format_stmt(stmt, 1))
    return lines


def pretty(program: Program) -> str:
    """Render a whole program; functions first, then global statements."""
    chunks = []
    for fn in program.functions:
        chunks.append("\n".join(format_function(fn)))
    body = []
    for stmt in program.global_statements:
        body.extend(format_stmt(stmt))
    if body:
        chunks.append("\n".join(body))
    if not chunks:
        return ""
    return "\n\n\n".join(chunks) + "\n"
