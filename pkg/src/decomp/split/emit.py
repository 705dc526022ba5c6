"""Code generation for a decomposition plan.

Each function is generated from its ordered steps. Values are named after
the variable that originally held them; a name is reused only once the
value it held is no longer needed, otherwise a numeric suffix is added.
Names of functions called in a scope are never used for variables there.
"""

from __future__ import annotations

from ..lang.nodes import (
    Assign,
    Call,
    CompoundBlock,
    ExprStmt,
    FunctionDef,
    Program,
    Return,
    Var,
    iter_stmts,
)
from ..lang.parser import make_block
from ..lang.printer import format_stmt, pretty
from ..lang.rewrite import rename_expr, rename_stmt
from .plan import MAIN_KEY, CallStep, Datum, Literal, NodeStep, step_reads

_KEYWORDS = frozenset(
    ["def", "return", "if", "elif", "else", "while", "for", "in", "and", "or", "not", "pass"]
)
_BUILTINS = frozenset(
    ["print", "input", "int", "float", "str", "len", "abs", "round", "split", "range", "main"]
)


def emit_refactored_source(plan, program=None) -> str:
    """Source text implementing ``plan``."""
    return pretty(plan.program)


def build_program(model):
    """Generate every function; return the program, signatures and main lines."""
    defs = []
    signatures = {}
    for key, fn in model.fns.items():
        if key == MAIN_KEY:
            continue
        if fn.synth is not None:
            params, body = fn.synth
            definition = FunctionDef(fn.name, tuple(params), tuple(body))
            signatures[key] = (tuple(params), ("result",))
        else:
            definition, params, returns = _Scope(model, fn).build()
            signatures[key] = (params, returns)
        defs.append(definition)
    main_def, _, _ = _Scope(model, model.main).build()
    main_lines = []
    for stmt in main_def.body:
        main_lines.extend(format_stmt(stmt))
    body = main_def.body
    if len(body) == 1 and isinstance(body[0], ExprStmt) and defs:
        program = Program(tuple(defs), (body[0],))
    elif not defs:
        program = Program((), tuple(body))
    else:
        defs.append(main_def)
        program = Program(tuple(defs), (ExprStmt(Call("main", ())),))
    from ..lang.checks import check_program

    check_program(program)
    return program, signatures, main_lines


class _Scope:
    def __init__(self, model, fn):
        self.model = model
        self.fn = fn
        self.names = {}  # datum -> name
        self.holder = {}  # name -> datum currently stored under it
        self.defined = set()  # every name assigned so far
        self.reserved = set(_KEYWORDS | _BUILTINS)
        for step in fn.steps:
            if isinstance(step, CallStep):
                self.reserved.add(model.fns[step.callee].name)
        self.last_use = self._liveness()

    def _liveness(self) -> dict:
        last = {}
        for i, step in enumerate(self.fn.steps):
            for d in step_reads(self.model, step):
                last[d] = i
        for d in self.fn.return_data:
            last[d] = len(self.fn.steps)
        return last

    # ---------------------------------------------------------------- names

    def _free(self, name, index) -> bool:
        if name in self.reserved:
            return False
        held = self.holder.get(name)
        return held is None or self.last_use.get(held, -1) <= index

    def bind(self, datum, index, avoid=()) -> str:
        base = datum.var
        if base in self.reserved:
            base = f"{base}_value"
        name, k = base, 2
        while not self._free(name, index) or name in avoid:
            name, k = f"{base}_{k}", k + 1
        old = self.holder.get(name)
        if old is not None:
            self.names.pop(old, None)
        self.holder[name] = datum
        self.names[datum] = name
        self.defined.add(name)
        return name

    def fresh_local(self, base, avoid) -> str:
        """A name for a block-local loop variable."""
        name, k = base, 2
        while name in self.reserved or name in self.defined or name in avoid:
            name, k = f"{base}_{k}", k + 1
        return name

    # ---------------------------------------------------------------- build

    def build(self):
        params = []
        for d in self.fn.param_data:
            params.append(self.bind(d, -1, avoid=params))
        body = []
        for i, step in enumerate(self.fn.steps):
            if isinstance(step, NodeStep):
                body.extend(self._node(step, i))
            else:
                body.append(self._call(step, i))
        returns = [self.names[d] for d in self.fn.return_data]
        if returns:
            body.append(Return(tuple(Var(n) for n in returns)))
        definition = FunctionDef(self.fn.name, tuple(params), tuple(body))
        return definition, tuple(params), tuple(returns)

    def _reads_mapping(self, node) -> dict:
        return {var: self.names[Datum(pid, var)] for var, pid in node.bindings}

    def _node(self, step, i) -> list:
        node = self.model.ddg.node(step.node)
        stmt = node.stmt
        mapping = self._reads_mapping(node)
        if isinstance(stmt, Assign):
            value = rename_expr(stmt.values[0], mapping)
            target = self.bind(Datum(node.id, node.writes[0]), i)
            return [Assign((target,), (value,), span=stmt.span)]
        if isinstance(stmt, ExprStmt):
            return [ExprStmt(rename_expr(stmt.expr, mapping), span=stmt.span)]
        return self._block(node, stmt, mapping, i)

    def _block(self, node, block, mapping, i) -> list:
        out = []
        reads = dict(mapping)
        for var in node.writes:
            out_datum = Datum(node.id, var)
            if var in reads:
                in_name = reads[var]
                in_datum = self.holder.get(in_name)
                if self.last_use.get(in_datum, -1) <= i:
                    self.holder[in_name] = out_datum
                    self.names.pop(in_datum, None)
                    self.names[out_datum] = in_name
                    continue
                copy = self.bind(out_datum, i)
                out.append(Assign((copy,), (Var(in_name),)))
                reads[var] = copy
            else:
                reads[var] = self.bind(out_datum, i)
        # loop variables are local to their block; keep them clear of data names
        targets = [s.target for s in iter_stmts([block]) if isinstance(s, CompoundBlock) and s.target]
        taken = set(reads.values())
        for target in targets:
            local = self.fresh_local(target, taken)
            reads[target] = local
            taken.add(local)
        renamed = rename_stmt(block, reads)
        out.append(renamed)
        return out

    def _call(self, step, i):
        callee = self.model.fns[step.callee]
        if step.args is not None:
            args = tuple(
                a.expr if isinstance(a, Literal) else Var(self.names[a]) for a in step.args
            )
            captures = step.captures
        else:
            args = tuple(Var(self.names[d]) for d in callee.param_data)
            captures = callee.return_data
        call = Call(callee.name, args)
        if not captures:
            return ExprStmt(call)
        targets = []
        for d in captures:
            targets.append(self.bind(d, i, avoid=targets))
        return Assign(tuple(targets), (call,))


__all__ = ["build_program", "emit_refactored_source", "make_block"]
