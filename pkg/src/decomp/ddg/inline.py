"""Replace user function calls by renamed copies of their bodies."""

from __future__ import annotations

import itertools

from ..errors import InlineError
from ..lang.checks import check_program
from ..lang.nodes import Assign, Call, CompoundBlock, ExprStmt, Program, Return, Var
from ..lang.parser import make_block
from ..lang.rewrite import map_expr, rename_stmt, statement_names


def inline_program(program: Program) -> Program:
    """Return an equivalent program without user functions.

    Arguments are bound to fresh copies of the parameter names through
    inserted assignments; a call nested in an expression is evaluated into a
    fresh temporary just before the statement that holds it.
    """
    if not program.functions:
        return program
    return _Inliner(program).run()


class _Inliner:
    def __init__(self, program: Program):
        self.program = program
        self.taken = statement_names(program.global_statements)
        for fn in program.functions:
            self.taken.add(fn.name)
            self.taken.update(fn.params)
            self.taken.update(statement_names(fn.body))
        self.counter = itertools.count(1)

    def run(self) -> Program:
        body = self.stmts(self.program.global_statements, {})
        result = Program((), tuple(body))
        check_program(result)
        return result

    def fresh(self, base: str) -> str:
        while True:
            name = f"{base}__{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name

    def user(self, expr):
        if isinstance(expr, Call) and self.program.function(expr.name) is not None:
            return self.program.function(expr.name)
        return None

    # ------------------------------------------------------------ statements

    def stmts(self, stmts, rename) -> list:
        out = []
        for stmt in stmts:
            out.extend(self.stmt(stmt, rename))
        return out

    def stmt(self, stmt, rename) -> list:
        if isinstance(stmt, Assign):
            return self._assign(stmt, rename)
        if isinstance(stmt, ExprStmt):
            fn = self.user(stmt.expr)
            if fn is not None:
                if fn.return_arity > 0:
                    raise InlineError(
                        f"return value of {fn.name!r} is discarded", stmt.span
                    )
                pre, _ = self.call(stmt.expr, rename)
                return pre
            pre = []
            expr = self.hoist(stmt.expr, rename, pre)
            return pre + [ExprStmt(expr, span=stmt.span)]
        if isinstance(stmt, CompoundBlock):
            return self._block(stmt, rename)
        raise InlineError("unexpected return statement", stmt.span)

    def _assign(self, stmt, rename) -> list:
        targets = tuple(rename.get(t, t) for t in stmt.targets)
        if len(stmt.values) == 1 and self.user(stmt.values[0]) is not None:
            fn = self.user(stmt.values[0])
            if fn.return_arity == 0:
                raise InlineError(f"{fn.name!r} returns nothing to capture", stmt.span)
            if fn.return_arity != len(targets):
                raise InlineError(
                    f"{fn.name!r} returns {fn.return_arity} values, "
                    f"{len(targets)} captured",
                    stmt.span,
                )
            pre, results = self.call(stmt.values[0], rename)
            return pre + [Assign(targets, tuple(results), span=stmt.span)]
        pre = []
        values = tuple(self.hoist(v, rename, pre) for v in stmt.values)
        return pre + [Assign(targets, values, span=stmt.span)]

    def _block(self, block, rename) -> list:
        pre = []
        test = iter_ = None
        if block.kind == "for":
            iter_ = self.hoist(block.iter, rename, pre)
        elif block.kind == "if":
            test = self.hoist(block.test, rename, pre)
        else:
            test_pre = []
            test = self.hoist(block.test, rename, test_pre)
            if test_pre:
                raise InlineError("function call in a loop condition", block.span)
        body = self.stmts(block.body, rename)
        orelse = self._orelse(block, rename)
        target = rename.get(block.target, block.target) if block.target else None
        new = make_block(
            block.kind, body, orelse, test=test, target=target, iter=iter_, span=block.span
        )
        return pre + [new]

    def _orelse(self, block, rename) -> list:
        orelse = block.orelse
        if (
            len(orelse) == 1
            and isinstance(orelse[0], CompoundBlock)
            and orelse[0].kind == "if"
        ):
            # an elif condition is evaluated only when reached
            probe = []
            self.hoist(orelse[0].test, rename, probe)
            if probe:
                raise InlineError("function call in an elif condition", orelse[0].span)
        return self.stmts(orelse, rename)

    # ----------------------------------------------------------- expressions

    def hoist(self, expr, rename, pre):
        """Rename ``expr`` and pull nested user calls out into ``pre``."""

        def visit(node):
            if isinstance(node, Var):
                return Var(rename.get(node.name, node.name), span=node.span)
            fn = self.user(node)
            if fn is None:
                return node
            if fn.return_arity != 1:
                raise InlineError(
                    f"{fn.name!r} must return exactly one value here", node.span
                )
            body, results = self.call(node, {}, renamed_args=True)
            pre.extend(body)
            temp = self.fresh(f"{fn.name}_ret")
            pre.append(Assign((temp,), (results[0],), span=node.span))
            return Var(temp, span=node.span)

        return map_expr(expr, visit)

    def call(self, call, rename, renamed_args=False):
        """Inline one call; return the statements and the returned expressions."""
        fn = self.program.function(call.name)
        pre = []
        if renamed_args:
            args = call.args
        else:
            args = tuple(self.hoist(a, rename, pre) for a in call.args)
        local = {}
        for name in list(fn.params) + sorted(statement_names(fn.body)):
            if name not in local:
                local[name] = self.fresh(name)
        for param, arg in zip(fn.params, args):
            pre.append(Assign((local[param],), (arg,), span=call.span))
        body = fn.body
        ret = body[-1] if body and isinstance(body[-1], Return) else None
        if ret is not None:
            body = body[:-1]
        pre.extend(self.stmts(body, local))
        results = []
        if ret is not None:
            results = [self.hoist(v, local, pre) for v in ret.values]
        return pre, results


def rename_program_vars(program: Program, mapping: dict) -> Program:
    """Consistently rename variables in global code (used by property tests)."""
    return Program(
        program.functions,
        tuple(rename_stmt(s, mapping) for s in program.global_statements),
    )
