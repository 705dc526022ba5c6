"""Structural rewrites over expressions and statements."""

from __future__ import annotations

from dataclasses import replace

from .nodes import (
    Assign,
    BinOp,
    Call,
    Compare,
    CompoundBlock,
    ExprStmt,
    FormatField,
    FStr,
    Return,
    UnaryOp,
    Var,
)


def map_expr(expr, fn):
    """Rebuild ``expr`` bottom-up, letting ``fn`` replace each rebuilt node."""
    if isinstance(expr, UnaryOp):
        expr = replace(expr, operand=map_expr(expr.operand, fn))
    elif isinstance(expr, (BinOp, Compare)):
        expr = replace(expr, left=map_expr(expr.left, fn), right=map_expr(expr.right, fn))
    elif isinstance(expr, Call):
        expr = replace(expr, args=tuple(map_expr(a, fn) for a in expr.args))
    elif isinstance(expr, FStr):
        parts = tuple(
            FormatField(map_expr(p.expr, fn), p.spec) if isinstance(p, FormatField) else p
            for p in expr.parts
        )
        expr = replace(expr, parts=parts)
    return fn(expr)


def substitute(expr, mapping: dict):
    """Replace ``Var(name)`` by ``mapping[name]`` (an expression) where present."""

    def swap(node):
        if isinstance(node, Var) and node.name in mapping:
            return mapping[node.name]
        return node

    return map_expr(expr, swap)


def rename_expr(expr, mapping: dict):
    def swap(node):
        if isinstance(node, Var) and node.name in mapping:
            return replace(node, name=mapping[node.name])
        return node

    return map_expr(expr, swap)


def rename_stmt(stmt, mapping: dict):
    """Rename variables throughout ``stmt``, including nested block bodies."""
    from .parser import make_block

    if isinstance(stmt, Assign):
        return replace(
            stmt,
            targets=tuple(mapping.get(t, t) for t in stmt.targets),
            values=tuple(rename_expr(v, mapping) for v in stmt.values),
        )
    if isinstance(stmt, ExprStmt):
        return replace(stmt, expr=rename_expr(stmt.expr, mapping))
    if isinstance(stmt, Return):
        return replace(stmt, values=tuple(rename_expr(v, mapping) for v in stmt.values))
    if isinstance(stmt, CompoundBlock):
        return make_block(
            stmt.kind,
            tuple(rename_stmt(s, mapping) for s in stmt.body),
            tuple(rename_stmt(s, mapping) for s in stmt.orelse),
            test=None if stmt.test is None else rename_expr(stmt.test, mapping),
            target=None if stmt.target is None else mapping.get(stmt.target, stmt.target),
            iter=None if stmt.iter is None else rename_expr(stmt.iter, mapping),
            span=stmt.span,
        )
    raise TypeError(f"not a statement: {stmt!r}")


def statement_names(stmts) -> set:
    """Every variable name read or written in ``stmts``, loop targets included."""
    from .nodes import expr_vars, iter_stmts, stmt_exprs

    names = set()
    for stmt in iter_stmts(stmts):
        for expr in stmt_exprs(stmt):
            names.update(expr_vars(expr))
        if isinstance(stmt, Assign):
            names.update(stmt.targets)
        if isinstance(stmt, CompoundBlock) and stmt.target:
            names.add(stmt.target)
    return names
