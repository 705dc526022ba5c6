"""Semantic validation of a parsed program."""

from __future__ import annotations

from ..errors import SemanticError
from .nodes import (
    BUILTINS,
    Assign,
    Call,
    CompoundBlock,
    Return,
    Str,
    Var,
    expr_calls,
    iter_stmts,
    iter_subexprs,
    stmt_exprs,
)

# builtin name -> (min args, max args); None means unbounded
BUILTIN_ARITY = {
    "print": (0, None),
    "input": (0, 1),
    "int": (1, 1),
    "float": (1, 1),
    "str": (1, 1),
    "len": (1, 1),
    "abs": (1, 1),
    "round": (1, 2),
    "split": (1, 2),
    "range": (1, 3),
}


def check_program(program) -> None:
    """Raise :class:`SemanticError` on the first violated rule."""
    _check_definitions(program)
    _check_calls(program)
    _check_recursion(program)
    _check_returns(program)
    for fn in program.functions:
        _check_scope(fn.body, set(fn.params), program)
    _check_scope(program.global_statements, set(), program)


def call_graph(program) -> dict:
    """Map each function name to the ordered list of user functions it calls."""
    names = program.function_names
    graph = {}
    for fn in program.functions:
        callees = []
        for stmt in iter_stmts(fn.body):
            for expr in stmt_exprs(stmt):
                for call in expr_calls(expr):
                    if call.name in names and call.name not in callees:
                        callees.append(call.name)
        graph[fn.name] = callees
    return graph


def _check_definitions(program):
    seen = set()
    for fn in program.functions:
        if fn.name in BUILTINS:
            raise SemanticError(f"function {fn.name!r} shadows a builtin", fn.span)
        if fn.name in seen:
            raise SemanticError(f"duplicate definition of function {fn.name!r}", fn.span)
        seen.add(fn.name)
        if len(set(fn.params)) != len(fn.params):
            raise SemanticError(f"duplicate parameter in {fn.name!r}", fn.span)
        for param in fn.params:
            if param in BUILTINS:
                raise SemanticError(f"parameter {param!r} shadows a builtin", fn.span)


def _all_statements(program):
    for fn in program.functions:
        yield from iter_stmts(fn.body)
    yield from iter_stmts(program.global_statements)


def _check_calls(program):
    for stmt in _all_statements(program):
        for expr in stmt_exprs(stmt):
            for call in expr_calls(expr):
                _check_call(call, program)


def _check_call(call: Call, program):
    fn = program.function(call.name)
    if fn is not None:
        if call.method:
            raise SemanticError(f"{call.name!r} cannot be called as a method", call.span)
        if len(call.args) != len(fn.params):
            raise SemanticError(
                f"{call.name!r} takes {len(fn.params)} arguments, got {len(call.args)}",
                call.span,
            )
        return
    if call.name not in BUILTIN_ARITY:
        raise SemanticError(f"call to unknown function {call.name!r}", call.span)
    low, high = BUILTIN_ARITY[call.name]
    n = len(call.args)
    if n < low or (high is not None and n > high):
        raise SemanticError(f"wrong number of arguments to {call.name!r}", call.span)
    if call.name == "input" and call.args and not isinstance(call.args[0], Str):
        raise SemanticError("input() prompt must be a string literal", call.span)


def _check_recursion(program):
    graph = call_graph(program)
    state = {}

    def visit(name, path):
        state[name] = "active"
        for callee in graph.get(name, ()):
            if state.get(callee) == "active":
                cycle = " -> ".join(path[path.index(callee):] + [callee]) if callee in path else callee
                raise SemanticError(f"recursion is not supported ({cycle})", program.function(callee).span)
            if callee not in state:
                visit(callee, path + [callee])
        state[name] = "done"

    for fn in program.functions:
        if fn.name not in state:
            visit(fn.name, [fn.name])


def _check_returns(program):
    for stmt in iter_stmts(program.global_statements):
        if isinstance(stmt, Return):
            raise SemanticError("'return' outside function", stmt.span)
    for fn in program.functions:
        returns = [s for s in iter_stmts(fn.body) if isinstance(s, Return)]
        arities = {len(r.values) for r in returns}
        if len(arities) > 1:
            raise SemanticError(f"return arity mismatch in {fn.name!r}", returns[-1].span)
        for ret in returns:
            if ret is not fn.body[-1]:
                raise SemanticError(
                    "'return' must be the last statement of a function", ret.span
                )


def _check_scope(stmts, defined, program):
    """Every variable must be written before it is read, within one scope."""
    for stmt in stmts:
        for expr in stmt_exprs(stmt):
            for node in iter_subexprs(expr):
                if isinstance(node, Var) and node.name not in defined:
                    raise SemanticError(f"use of {node.name!r} before definition", node.span)
        if isinstance(stmt, Assign):
            for name in stmt.targets:
                if name in BUILTINS:
                    raise SemanticError(f"cannot assign to builtin {name!r}", stmt.span)
            if len(stmt.targets) > 1 and len(stmt.values) == 1:
                value = stmt.values[0]
                if not (isinstance(value, Call) and program.function(value.name) is not None):
                    raise SemanticError("only a function's returns can be unpacked", stmt.span)
            defined.update(stmt.targets)
        elif isinstance(stmt, CompoundBlock):
            inner = set(defined)
            if stmt.kind == "for":
                if stmt.target in defined or stmt.target in BUILTINS:
                    raise SemanticError(
                        f"loop variable {stmt.target!r} shadows an existing name", stmt.span
                    )
                inner.add(stmt.target)
            _check_scope(stmt.body, inner, program)
            _check_scope(stmt.orelse, set(defined), program)
            defined.update(stmt.defined_vars)
