"""Data dependency graph construction.

One node per assignment target, print statement or compound block. Each
write makes a fresh version, and readers bind to the latest version, so
straight-line code needs no further alias reasoning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lang.nodes import (
    CASTS,
    Assign,
    BinOp,
    Call,
    CompoundBlock,
    ExprStmt,
    Program,
    Return,
    Span,
    Var,
    contains_call,
    contains_print,
    expr_vars,
    iter_stmts,
    iter_subexprs,
    stmt_exprs,
)
from ..lang.printer import format_expr, format_stmt
from ..lang.rewrite import substitute

SOURCE = "source"
COMPUTATION = "computation"
GOAL = "goal"

DATA_PROCESSING = "data_processing"
COMPLEX = "complex_computation"


class DeadCodeWarning(UserWarning):
    """A node whose value never reaches an output."""

    def __init__(self, node):
        super().__init__(f"{node.label!r} is computed but never used")
        self.node = node
        self.span = node.span


@dataclass(frozen=True)
class DdgNode:
    id: int
    kind: str
    label: str
    op_signature: str
    # originating statement: an Assign with one target, an ExprStmt or a block
    stmt: object = field(compare=False, repr=False)
    writes: tuple = ()
    # (variable, producer id) pairs in first-read order
    bindings: tuple = ()
    index: int = 0  # position of the statement in the global sequence
    span: Span = None
    tags: frozenset = frozenset()
    inputs_before: int = 0  # input() calls in earlier statements
    has_input: bool = False

    @property
    def reads(self) -> tuple:
        return tuple(var for var, _ in self.bindings)

    @property
    def is_constant(self) -> bool:
        """A source defined from literals alone, such as ``pi = 3.14159``."""
        return self.kind == SOURCE and not self.has_input

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "label": self.label,
            "tags": sorted(self.tags),
            "span": self.span.to_dict() if self.span else None,
        }


@dataclass(frozen=True)
class Ddg:
    nodes: tuple
    edges: tuple  # (producer id, consumer id), each pair once
    goal_order: tuple
    warnings: tuple = ()
    _preds: dict = field(default=None, init=False, repr=False, compare=False)
    _succs: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        preds = {node.id: [] for node in self.nodes}
        succs = {node.id: [] for node in self.nodes}
        for u, v in self.edges:
            preds[v].append(u)
            succs[u].append(v)
        object.__setattr__(self, "_preds", preds)
        object.__setattr__(self, "_succs", succs)

    def node(self, nid: int) -> DdgNode:
        return self.nodes[nid]

    def preds(self, nid: int) -> list:
        """Producers of ``nid`` in binding order."""
        return self._preds[nid]

    def succs(self, nid: int) -> list:
        return self._succs[nid]

    def ancestors(self, nid: int) -> set:
        seen = set()
        stack = list(self.preds(nid))
        while stack:
            cur = stack.pop()
            if cur not in seen:
                seen.add(cur)
                stack.extend(self.preds(cur))
        return seen

    def to_dict(self) -> dict:
        return {
            "nodes": [node.to_dict() for node in self.nodes],
            "edges": [[u, v] for u, v in self.edges],
            "goal_order": list(self.goal_order),
        }


def build_ddg(program: Program) -> Ddg:
    """Build the dependency graph of a program without user functions."""
    if program.functions:
        raise ValueError("build_ddg expects a program without functions; inline it first")
    env = {}  # variable -> id of the node holding its latest version
    nodes = []
    inputs_seen = 0
    for index, stmt in enumerate(program.global_statements):
        before = dict(env)  # parallel assignment reads the old versions
        produced = []
        for part, writes in _split_statement(stmt):
            nid = len(nodes)
            reads = _ordered_reads(part)
            bindings = tuple((var, before[var]) for var in reads if var in before)
            node = _make_node(nid, part, writes, bindings, index, inputs_seen)
            inputs_seen += _count_inputs(part)
            nodes.append(node)
            produced.append(node)
        for node in produced:
            for var in node.writes:
                env[var] = node.id
    nodes = _tag_nodes(nodes)
    edges = []
    for node in nodes:
        for producer in dict.fromkeys(pid for _, pid in node.bindings):
            edges.append((producer, node.id))
    goals = tuple(node.id for node in nodes if node.kind == GOAL)
    ddg = Ddg(tuple(nodes), tuple(edges), goals)
    warnings = tuple(DeadCodeWarning(node) for node in dead_code(ddg))
    object.__setattr__(ddg, "warnings", warnings)
    return ddg


def dead_code(ddg: Ddg) -> list:
    """Nodes with no path to any goal, in source order."""
    live = set(ddg.goal_order)
    for goal in ddg.goal_order:
        live |= ddg.ancestors(goal)
    return [node for node in ddg.nodes if node.id not in live]


def _split_statement(stmt):
    """Yield ``(statement part, written variables)`` for each DDG node."""
    if isinstance(stmt, Assign):
        if len(stmt.targets) != len(stmt.values):
            raise ValueError("unpacking assignment outside a function call")
        for target, value in zip(stmt.targets, stmt.values):
            yield Assign((target,), (value,), span=stmt.span), (target,)
    elif isinstance(stmt, ExprStmt):
        yield stmt, ()
    elif isinstance(stmt, CompoundBlock):
        yield stmt, tuple(_block_writes(stmt))
    elif isinstance(stmt, Return):
        raise ValueError("return outside function")
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def _block_writes(block) -> list:
    order = []
    for inner in iter_stmts(block.body + block.orelse):
        if isinstance(inner, Assign):
            for target in inner.targets:
                if target in block.defined_vars and target not in order:
                    order.append(target)
    return order


def _ordered_reads(stmt) -> list:
    """Variables read from outside ``stmt``, in first-occurrence order."""
    if not isinstance(stmt, CompoundBlock):
        out = []
        for expr in stmt_exprs(stmt):
            out.extend(v for v in expr_vars(expr) if v not in out)
        return out
    out = []
    for inner in iter_stmts([stmt]):
        for expr in stmt_exprs(inner):
            out.extend(v for v in expr_vars(expr) if v not in out)
    # a written variable keeps its old value when the body does not run
    out.extend(v for v in _block_writes(stmt) if v not in out)
    return [v for v in out if v != stmt.target]


def _count_inputs(stmt) -> int:
    count = 0
    for inner in iter_stmts([stmt]):
        for expr in stmt_exprs(inner):
            count += sum(
                1 for node in iter_subexprs(expr) if isinstance(node, Call) and node.name == "input"
            )
    return count


def _make_node(nid, stmt, writes, bindings, index, inputs_before) -> DdgNode:
    has_input = contains_call(stmt, "input")
    holes = {var: Var(f"#{k}") for k, (var, _) in enumerate(bindings)}
    if isinstance(stmt, Assign):
        kind = COMPUTATION if bindings else SOURCE
        label = stmt.targets[0]
        signature = format_expr(substitute(stmt.values[0], holes))
    elif isinstance(stmt, ExprStmt):
        kind = GOAL if contains_print(stmt) else COMPUTATION
        label = _goal_label(stmt)
        signature = format_expr(substitute(stmt.expr, holes))
    else:
        kind = GOAL if contains_print(stmt) else COMPUTATION
        label = _goal_label(stmt) if kind == GOAL else (writes[0] if writes else stmt.kind)
        signature = _block_signature(stmt, holes)
    return DdgNode(
        id=nid,
        kind=kind,
        label=label,
        op_signature=signature,
        stmt=stmt,
        writes=tuple(writes),
        bindings=tuple(bindings),
        index=index,
        span=stmt.span,
        inputs_before=inputs_before,
        has_input=has_input,
    )


def _block_signature(block, holes) -> str:
    from ..lang.rewrite import rename_stmt

    renamed = rename_stmt(block, {var: hole.name for var, hole in holes.items()})
    return "\n".join(format_stmt(renamed))


def _goal_label(stmt) -> str:
    """The first variable a print statement outputs, or a fallback."""
    for inner in iter_stmts([stmt]):
        for expr in stmt_exprs(inner):
            for call in (n for n in iter_subexprs(expr) if isinstance(n, Call)):
                if call.name == "print":
                    for arg in call.args:
                        names = expr_vars(arg)
                        if names:
                            return names[0]
    if isinstance(stmt, CompoundBlock):
        writes = _block_writes(stmt)
        if writes:
            return writes[0]
    return "output"


def _operator_count(expr) -> tuple:
    ops = [n for n in iter_subexprs(expr) if isinstance(n, BinOp)]
    return len(ops), any(op.op == "**" for op in ops)


def _tag_nodes(nodes) -> list:
    split_or_cast = set()
    out = []
    for node in nodes:
        tags = set()
        stmt = node.stmt
        uses_split = contains_call(stmt, "split")
        if isinstance(stmt, Assign):
            value = stmt.values[0]
            is_cast = isinstance(value, Call) and value.name in CASTS
            from_split = any(pid in split_or_cast for _, pid in node.bindings)
            if uses_split or (is_cast and from_split):
                split_or_cast.add(node.id)
            count, has_pow = _operator_count(value)
            if node.kind == COMPUTATION and (count >= 3 or has_pow):
                tags.add(COMPLEX)
        if node.kind != SOURCE:
            consumes = any(pid in split_or_cast for _, pid in node.bindings)
            if uses_split or (isinstance(stmt, CompoundBlock) and consumes):
                tags.add(DATA_PROCESSING)
        out.append(DdgNode(**{**_fields(node), "tags": frozenset(tags)}))
    return out


def _fields(node) -> dict:
    return {name: getattr(node, name) for name in node.__dataclass_fields__}
