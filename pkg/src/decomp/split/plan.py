"""Decomposition plans: which statements go in which function, and the wiring.

A plan is built from a coloring. Every color becomes a function holding
that color's statements; ``main`` keeps the uncolored remainder and calls
the others. Parameters and returns follow from the data crossing function
boundaries. Shared functions are then localized: every function that needs
a shared value calls the shared function itself, so a helper such as
``circle_area`` ends up with one caller per consumer.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from ..errors import DecompError
from ..ddg.graph import GOAL, Ddg
from .coloring import GOAL_KIND, MAIN, SHARED_KIND, Coloring

SUBTASK = "subtask"
SHARED = "shared"
DUPLICATION = "duplication_collapse"
DATA_PROCESSING = "data_processing"
COMPLEX = "complex_computation"

MAIN_KEY = "main"
_MAX_ROUNDS = 200


class PlanError(DecompError):
    """The coloring cannot be turned into an executable call order."""


class Datum(NamedTuple):
    """A value: the node that produced it and the variable it was written to."""

    node: int
    var: str


@dataclass(frozen=True)
class Literal:
    expr: object  # a Num node


@dataclass(frozen=True)
class NodeStep:
    node: int


@dataclass(frozen=True)
class CallStep:
    callee: str
    # fixed wiring, used only for synthesized callees
    args: Optional[tuple] = None
    captures: Optional[tuple] = None


@dataclass
class FunctionModel:
    """Mutable working form of one planned function."""

    key: str
    kind: str  # main, goal, shared, duplicate, data_processing
    rationale: str
    color: int
    label: str
    steps: list = field(default_factory=list)
    # synthesized functions carry their own code: (param names, body statements)
    synth: Optional[tuple] = None
    covers: tuple = ()  # DDG nodes a synthesized function stands for
    param_data: tuple = ()
    return_data: tuple = ()
    name: str = ""


@dataclass
class PlanModel:
    ddg: Ddg
    coloring: Coloring
    fns: dict  # key -> FunctionModel, in presentation order; main last
    conflicts: list = field(default_factory=list)

    def copy(self) -> "PlanModel":
        fns = {}
        for key, fn in self.fns.items():
            fns[key] = FunctionModel(**{**fn.__dict__, "steps": list(fn.steps)})
        return PlanModel(self.ddg, self.coloring, fns, list(self.conflicts))

    @property
    def main(self) -> FunctionModel:
        return self.fns[MAIN_KEY]

    def owner_of(self) -> dict:
        owner = {}
        for key, fn in self.fns.items():
            for step in fn.steps:
                if isinstance(step, NodeStep):
                    owner[step.node] = key
            if fn.synth is not None:
                for nid in fn.covers:
                    owner[nid] = key
        return owner

    def callers(self, key) -> list:
        return [
            k for k, fn in self.fns.items()
            if any(isinstance(s, CallStep) and s.callee == key for s in fn.steps)
        ]


# ------------------------------------------------------------------ output


@dataclass(frozen=True)
class PlannedFunction:
    suggested_name: str
    color: int
    statements: tuple  # DDG node ids, source order
    params: tuple
    returns: tuple
    rationale: str
    calls: tuple = ()
    definition: object = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "name": self.suggested_name,
            "color": self.color,
            "params": list(self.params),
            "returns": list(self.returns),
            "statements": list(self.statements),
            "rationale": self.rationale,
            "calls": list(self.calls),
        }


@dataclass(frozen=True)
class CrossEdge:
    source: int
    target: int
    var: str
    source_function: str
    target_function: str

    def to_dict(self) -> dict:
        return {
            "from": self.source,
            "to": self.target,
            "datum": self.var,
            "from_function": self.source_function,
            "to_function": self.target_function,
        }


@dataclass(frozen=True)
class DecompositionPlan:
    functions: tuple  # PlannedFunction, main excluded
    main_body: tuple  # source lines of the orchestrating code
    cross_edges: tuple
    conflicts: tuple = ()
    program: object = field(default=None, compare=False, repr=False)
    model: object = field(default=None, compare=False, repr=False)

    def function(self, name) -> Optional[PlannedFunction]:
        for fn in self.functions:
            if fn.suggested_name == name:
                return fn
        return None

    def to_dict(self) -> dict:
        return {
            "functions": [fn.to_dict() for fn in self.functions],
            "main": list(self.main_body),
            "cross_edges": [edge.to_dict() for edge in self.cross_edges],
            "conflicts": list(self.conflicts),
        }


# ------------------------------------------------------------- derivation


def derive_plan(ddg: Ddg, coloring: Coloring, program=None, localize: bool = True):
    """Turn a coloring into an executable plan.

    With ``localize`` off, ``main`` calls every function and passes shared
    values along; with it on (the default), consumers call shared functions
    themselves.
    """
    model = initial_model(ddg, coloring)
    if localize:
        localize_shared(model)
    return finalize(model)


def initial_model(ddg: Ddg, coloring: Coloring) -> PlanModel:
    by_color = {}
    for node in ddg.nodes:
        by_color.setdefault(coloring.assignment[node.id], []).append(node.id)
    fns = {}
    goal_colors = [c for c in coloring.colors if coloring.kinds[c] == GOAL_KIND]
    shared_colors = [c for c in coloring.colors if coloring.kinds[c] == SHARED_KIND]
    for c in goal_colors + shared_colors:
        members = by_color.get(c, [])
        if not members:
            continue
        if coloring.kinds[c] == GOAL_KIND:
            label = ddg.node(coloring.goal_of[c]).label
            fn = FunctionModel(f"c{c}", "goal", SUBTASK, c, label)
        else:
            root = ddg.node(coloring.roots.get(c, members[-1]))
            rationale = COMPLEX if "complex_computation" in root.tags else SHARED
            fn = FunctionModel(f"c{c}", "shared", rationale, c, root.label)
        fn.steps = [NodeStep(n) for n in members]
        fns[fn.key] = fn
    main = FunctionModel(MAIN_KEY, "main", "main", MAIN, "main")
    main.steps = [NodeStep(n) for n in by_color.get(MAIN, [])]
    main.steps += [CallStep(key) for key in fns]
    fns[MAIN_KEY] = main
    model = PlanModel(ddg, coloring, fns)
    solve_interfaces(model)
    return model


def localize_shared(model: PlanModel) -> None:
    """Let each consumer of a shared function call it directly.

    Applies only when the shared function's inputs all come from ``main``,
    since only then can every consumer be handed those inputs.
    """
    owner = model.owner_of()
    for key in [k for k, fn in model.fns.items() if fn.kind == "shared"]:
        solve_interfaces(model)
        shared = model.fns[key]
        if any(owner.get(d.node) != MAIN_KEY for d in shared.param_data):
            continue
        # only values the shared function computes itself, not ones it passes on
        outputs = set()
        for step in shared.steps:
            if isinstance(step, NodeStep):
                outputs |= step_writes(model, step)
        outputs &= set(shared.return_data)
        consumers = []
        for other_key, fn in model.fns.items():
            if other_key in (key, MAIN_KEY):
                continue
            if _own_reads(model, fn) & outputs:
                consumers.append(other_key)
        if not consumers:
            continue
        for other_key in consumers:
            model.fns[other_key].steps.insert(0, CallStep(key))
        main = model.main
        if not (_own_reads(model, main) & outputs):
            main.steps = [s for s in main.steps if not (isinstance(s, CallStep) and s.callee == key)]
    solve_interfaces(model)


def _own_reads(model, fn) -> set:
    """Data read by ``fn``'s own statements (calls excluded)."""
    out = set()
    for step in fn.steps:
        if isinstance(step, NodeStep):
            node = model.ddg.node(step.node)
            out.update(Datum(pid, var) for var, pid in node.bindings)
    return out


# ------------------------------------------------------------- interfaces


def step_reads(model, step) -> set:
    if isinstance(step, NodeStep):
        node = model.ddg.node(step.node)
        return {Datum(pid, var) for var, pid in node.bindings}
    if step.args is not None:
        return {a for a in step.args if isinstance(a, Datum)}
    return set(model.fns[step.callee].param_data)


def step_writes(model, step) -> set:
    if isinstance(step, NodeStep):
        node = model.ddg.node(step.node)
        return {Datum(node.id, var) for var in node.writes}
    if step.captures is not None:
        return set(step.captures)
    return set(model.fns[step.callee].return_data)


def solve_interfaces(model: PlanModel) -> None:
    """Fixpoint: params are data read but not produced, returns are data a
    caller reads from the callee."""
    fns = [fn for fn in model.fns.values() if fn.synth is None]
    for _ in range(_MAX_ROUNDS):
        changed = False
        for fn in fns:
            produced, read = set(), set(fn.return_data)
            for step in fn.steps:
                produced |= step_writes(model, step)
                read |= step_reads(model, step)
            params = tuple(sorted(read - produced))
            if params != fn.param_data:
                fn.param_data, changed = params, True
        for fn in fns:
            if fn.key == MAIN_KEY:
                continue
            own = set()
            for step in fn.steps:
                own |= step_writes(model, step)
            needed = set()
            for caller_key in model.callers(fn.key):
                caller = model.fns[caller_key]
                needed |= set(caller.return_data)
                for step in caller.steps:
                    if isinstance(step, CallStep) and step.callee == fn.key:
                        continue
                    needed |= step_reads(model, step)
            returns = tuple(sorted(own & needed))
            if returns != fn.return_data:
                fn.return_data, changed = returns, True
        if not changed:
            break
    else:
        raise PlanError("parameter inference did not converge")
    if model.main.param_data:
        missing = ", ".join(d.var for d in model.main.param_data)
        raise PlanError(f"main cannot obtain {missing}")


# ----------------------------------------------------------------- order


def covered_nodes(model, key, _seen=None) -> set:
    fn = model.fns[key]
    if fn.synth is not None:
        return set(fn.covers)
    out = set()
    for step in fn.steps:
        if isinstance(step, NodeStep):
            out.add(step.node)
        else:
            out |= covered_nodes(model, step.callee)
    return out


def _effect_nodes(model, nodes) -> list:
    from ..lang.nodes import contains_print

    return sorted(
        n for n in nodes
        if model.ddg.node(n).has_input or contains_print(model.ddg.node(n).stmt)
    )


def order_steps(model: PlanModel, fn: FunctionModel) -> None:
    """Topologically order a function's steps.

    Data dependencies come first; steps that print or read input keep their
    original relative order; ties go to the earliest source statement.
    """
    steps = fn.steps
    n = len(steps)
    covers = []
    for step in steps:
        if isinstance(step, NodeStep):
            covers.append({step.node})
        elif step.captures is not None:
            covers.append({d.node for d in step.captures})
        else:
            covers.append(covered_nodes(model, step.callee))
    writer = {}
    for i, step in enumerate(steps):
        for d in step_writes(model, step):
            writer[d] = i
    succ = [set() for _ in range(n)]
    for i, step in enumerate(steps):
        for d in step_reads(model, step):
            j = writer.get(d)
            if j is not None and j != i:
                succ[j].add(i)
    effects = []
    for i in range(n):
        found = _effect_nodes(model, covers[i])
        if found:
            effects.append((found[0], i))
    effects.sort()
    for (_, a), (_, b) in zip(effects, effects[1:]):
        succ[a].add(b)
    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    heap = [(min(covers[i]) if covers[i] else 0, i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (min(covers[j]) if covers[j] else 0, j))
    if len(order) != n:
        raise PlanError(f"no valid statement order inside {fn.label!r}")
    fn.steps = [steps[i] for i in order]


# ---------------------------------------------------------------- naming


_RESERVED = frozenset(
    ["def", "return", "if", "elif", "else", "while", "for", "in", "and", "or", "not",
     "pass", "main", "print", "input", "int", "float", "str", "len", "abs", "round",
     "split", "range"]
)


def assign_names(model: PlanModel) -> None:
    taken = set(_RESERVED)
    model.main.name = "main"
    for fn in model.fns.values():
        if fn.key == MAIN_KEY:
            continue
        base = fn.label if fn.label.isidentifier() else "helper"
        name, k = base, 2
        while name in taken:
            name, k = f"{base}_{k}", k + 1
        taken.add(name)
        fn.name = name


# --------------------------------------------------------------- finalize


def finalize(model: PlanModel) -> DecompositionPlan:
    from .emit import build_program

    solve_interfaces(model)
    _check_acyclic_calls(model)
    for fn in model.fns.values():
        if fn.synth is None:
            order_steps(model, fn)
    assign_names(model)
    program, signatures, main_lines = build_program(model)
    owner = model.owner_of()
    functions = []
    for key, fn in model.fns.items():
        if key == MAIN_KEY:
            continue
        params, returns = signatures[key]
        if fn.synth is not None:
            statements = tuple(sorted(fn.covers))
        else:
            statements = tuple(sorted(s.node for s in fn.steps if isinstance(s, NodeStep)))
        calls = tuple(
            dict.fromkeys(model.fns[s.callee].name for s in fn.steps if isinstance(s, CallStep))
        )
        functions.append(
            PlannedFunction(
                fn.name, fn.color, statements, params, returns, fn.rationale, calls,
                definition=program.function(fn.name),
            )
        )
    cross = []
    for u, v in model.ddg.edges:
        fu, fv = owner.get(u), owner.get(v)
        if fu != fv:
            node_v = model.ddg.node(v)
            for var, pid in node_v.bindings:
                if pid == u:
                    cross.append(CrossEdge(u, v, var, model.fns[fu].name, model.fns[fv].name))
    return DecompositionPlan(
        tuple(functions),
        tuple(main_lines),
        tuple(cross),
        tuple(model.conflicts),
        program=program,
        model=model,
    )


def _check_acyclic_calls(model):
    state = {}

    def visit(key):
        state[key] = 1
        for step in model.fns[key].steps:
            if isinstance(step, CallStep):
                if state.get(step.callee) == 1:
                    raise PlanError("planned functions call each other in a cycle")
                if step.callee not in state:
                    visit(step.callee)
        state[key] = 2

    visit(MAIN_KEY)


def check_plan(plan: DecompositionPlan) -> list:
    """Return a list of violated plan invariants (empty when valid)."""
    problems = []
    for fn in plan.functions:
        if set(fn.params) & set(fn.returns):
            problems.append(f"{fn.suggested_name}: a name is both parameter and return")
        if not fn.statements:
            problems.append(f"{fn.suggested_name}: no statements")
        definition = fn.definition
        if definition is not None:
            from ..lang.nodes import expr_vars, iter_stmts, stmt_exprs

            used = set()
            for stmt in iter_stmts(definition.body):
                for expr in stmt_exprs(stmt):
                    used.update(expr_vars(expr))
            for param in fn.params:
                if param not in used:
                    problems.append(f"{fn.suggested_name}: parameter {param!r} is unused")
    return problems


def goal_functions(plan: DecompositionPlan) -> list:
    return [fn for fn in plan.functions if fn.rationale == SUBTASK]


__all__ = [
    "CallStep",
    "CrossEdge",
    "Datum",
    "DecompositionPlan",
    "FunctionModel",
    "GOAL",
    "Literal",
    "NodeStep",
    "PlanError",
    "PlanModel",
    "PlannedFunction",
    "check_plan",
    "derive_plan",
    "finalize",
    "initial_model",
    "localize_shared",
    "solve_interfaces",
]
