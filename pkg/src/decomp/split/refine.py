"""Plan refinement: collapse duplicates and isolate data-processing stages."""

from __future__ import annotations

from ..ddg.graph import DATA_PROCESSING as DP_TAG
from ..errors import RefineConflict
from ..lang.nodes import Assign, Num, Return, Var
from ..lang.rewrite import rename_expr
from .duplicates import CONSTANT_FACTOR, root_chain, strip_literal, _holed
from .plan import (
    DATA_PROCESSING,
    DUPLICATION,
    MAIN_KEY,
    CallStep,
    Datum,
    FunctionModel,
    Literal,
    NodeStep,
    PlanError,
    finalize,
    order_steps,
    solve_interfaces,
)


def refine_plan(plan, duplicates, ddg=None):
    """Return a new plan with duplicates collapsed and data processing hoisted.

    Groups that cannot be collapsed are skipped and described in
    ``plan.conflicts``.
    """
    model = plan.model.copy()
    for index, group in enumerate(duplicates, start=1):
        try:
            _collapse(model, group, index)
        except RefineConflict as exc:
            model.conflicts.append(str(exc))
    _elide_wrappers(model)
    _hoist_data_processing(model)
    return finalize(model)


# ------------------------------------------------------------- duplicates


def _common_label(labels) -> str:
    parts = [label.split("_") for label in labels]
    suffix = []
    for words in zip(*(reversed(p) for p in parts)):
        if len(set(words)) != 1:
            break
        suffix.insert(0, words[0])
    if suffix:
        return "_".join(suffix)
    prefix = []
    for words in zip(*parts):
        if len(set(words)) != 1:
            break
        prefix.append(words[0])
    return "_".join(prefix) if prefix else labels[0]


def _collapse(model, group, index):
    ddg = model.ddg
    owner = model.owner_of()
    members = list(group.members)
    covers = [tuple(c) for c in group.covered] or [(m,) for m in members]
    owners = []
    for cover in covers:
        keys = {owner.get(n) for n in cover}
        if len(keys) != 1 or None in keys:
            raise RefineConflict(f"duplicate group {members} is split across functions")
        key = keys.pop()
        if key == MAIN_KEY:
            raise RefineConflict(f"duplicate group {members} has a member in main")
        if model.fns[key].synth is not None:
            raise RefineConflict(f"duplicate group {members} overlaps another collapse")
        owners.append(key)

    if group.kind == CONSTANT_FACTOR:
        params, body, args = _factor_function(ddg, members)
    else:
        params, body, args = _alpha_function(ddg, covers)

    key = f"dup{index}"
    label = "compute_" + _common_label([ddg.node(m).label for m in members])
    fn = FunctionModel(key, "duplicate", DUPLICATION, -1, label)
    fn.synth = (tuple(params), tuple(body))
    fn.covers = tuple(sorted(n for cover in covers for n in cover))
    for member, cover, member_args, owner_key in zip(members, covers, args, owners):
        target = model.fns[owner_key]
        node = ddg.node(member)
        call = CallStep(key, args=tuple(member_args), captures=(Datum(member, node.writes[0]),))
        steps = []
        for step in target.steps:
            if isinstance(step, NodeStep) and step.node in cover:
                if step.node == member:
                    steps.append(call)
                continue
            steps.append(step)
        target.steps = steps
    _insert_before_main(model, key, fn)
    try:
        solve_interfaces(model)
        for owner_key in set(owners):
            order_steps(model, model.fns[owner_key])
    except PlanError as exc:
        raise RefineConflict(str(exc)) from None


def _insert_before_main(model, key, fn):
    items = [(k, v) for k, v in model.fns.items() if k != MAIN_KEY]
    items.append((key, fn))
    items.append((MAIN_KEY, model.fns[MAIN_KEY]))
    model.fns.clear()
    model.fns.update(items)


def _factor_function(ddg, members):
    stripped = [strip_literal(_holed(ddg.node(m))) for m in members]
    carriers = [i for i, s in enumerate(stripped) if s[2] is not None]
    positions = set()
    for i in carriers:
        parts = root_chain(ddg.node(members[i]).stmt.values[0])
        positions.add((stripped[i][2], parts[stripped[i][2]][0]))
    if len(positions) != 1:
        raise RefineConflict(f"literal factors of {list(members)} sit at different positions")
    rep = members[carriers[0]]
    rep_node = ddg.node(rep)
    names = [var for var, _ in rep_node.bindings]
    factor = "factor"
    while factor in names:
        factor += "_"
    pos = stripped[carriers[0]][2]
    expr = _replace_chain_operand(rep_node.stmt.values[0], pos, Var(factor))
    params = names + [factor]
    body = [Return((expr,))]
    args = []
    for m, s in zip(members, stripped):
        node = ddg.node(m)
        data = [Datum(pid, var) for var, pid in node.bindings]
        if s[2] is None:
            literal = Num(1, "1")
        else:
            literal = root_chain(node.stmt.values[0])[s[2]][1]
        args.append(data + [Literal(literal)])
    return params, body, args


def _replace_chain_operand(expr, pos, replacement):
    """Replace operand ``pos`` of the root ``*``/``/`` chain."""
    from dataclasses import replace

    parts = root_chain(expr)
    depth = len(parts) - 1 - pos  # steps down the left spine
    if depth == len(parts) - 1:
        # the first operand is the innermost left child
        def rebuild(node, level):
            if level == 0:
                return replacement
            return replace(node, left=rebuild(node.left, level - 1))

        return rebuild(expr, len(parts) - 1)

    def rebuild_right(node, level):
        if level == 0:
            return replace(node, right=replacement)
        return replace(node, left=rebuild_right(node.left, level - 1))

    return rebuild_right(expr, depth)


def _alpha_function(ddg, covers):
    """Body from the first member; differing inputs become parameters."""
    rep = covers[0]
    rep_set = set(rep)
    # leaves: (position in cover, binding index) pairs reading outside data
    leaves = []
    for j, nid in enumerate(rep):
        for k, (_, pid) in enumerate(ddg.node(nid).bindings):
            if pid not in rep_set:
                leaves.append((j, k))

    def datum(cover, j, k):
        var, pid = ddg.node(cover[j]).bindings[k]
        return Datum(pid, var)

    # merge leaves that read the same value in every member
    slots = []  # list of (leaf list)
    for leaf in leaves:
        for slot in slots:
            if all(datum(c, *slot[0]) == datum(c, *leaf) for c in covers):
                slot.append(leaf)
                break
        else:
            slots.append([leaf])
    params = []
    leaf_name = {}
    for slot in slots:
        base = _common_label([datum(c, *slot[0]).var for c in covers])
        name, n = base, 2
        while name in params:
            name, n = f"{base}_{n}", n + 1
        params.append(name)
        for leaf in slot:
            leaf_name[leaf] = name
    # internal values, producers first (covers list consumers before producers)
    order = list(range(len(rep)))[::-1]
    internal = {}
    taken = set(params)
    body = []
    for j in order:
        node = ddg.node(rep[j])
        mapping = {}
        for k, (var, pid) in enumerate(node.bindings):
            if (j, k) in leaf_name:
                mapping[var] = leaf_name[(j, k)]
            else:
                mapping[var] = internal[pid]
        expr = rename_expr(node.stmt.values[0], mapping)
        if j == 0:
            body.append(Return((expr,)))
        else:
            base = _common_label([ddg.node(c[j]).writes[0] for c in covers])
            name, n = base, 2
            while name in taken:
                name, n = f"{base}_{n}", n + 1
            taken.add(name)
            internal[node.id] = name
            body.append(Assign((name,), (expr,)))
    args = []
    for cover in covers:
        args.append([datum(cover, *slot[0]) for slot in slots])
    return params, body, args


def _elide_wrappers(model):
    """Drop functions left holding nothing but one call to a collapsed duplicate.

    Their callers call the duplicate directly instead.
    """
    for key in [k for k in model.fns if k != MAIN_KEY]:
        fn = model.fns[key]
        if fn.synth is not None or len(fn.steps) != 1:
            continue
        (call,) = fn.steps
        if not isinstance(call, CallStep) or call.args is None:
            continue
        if not set(fn.return_data) <= set(call.captures):
            continue
        snapshot = model.copy()
        callers = model.callers(key)
        for caller_key in callers:
            caller = model.fns[caller_key]
            caller.steps = [
                call if isinstance(s, CallStep) and s.callee == key else s for s in caller.steps
            ]
        del model.fns[key]
        try:
            solve_interfaces(model)
            for caller_key in callers:
                order_steps(model, model.fns[caller_key])
        except PlanError:
            model.fns.clear()
            model.fns.update(snapshot.fns)
            solve_interfaces(model)


# -------------------------------------------------------- data processing


def _hoist_data_processing(model):
    ddg = model.ddg
    counter = 0
    for key in [k for k, fn in model.fns.items() if fn.synth is None]:
        fn = model.fns[key]
        own = [s.node for s in fn.steps if isinstance(s, NodeStep)]
        tagged = [n for n in own if DP_TAG in ddg.node(n).tags]
        if not tagged:
            continue
        chosen = set(tagged)
        for nid in own:
            node = ddg.node(nid)
            consumers = ddg.succs(nid)
            if node.is_constant and consumers and all(c in chosen for c in consumers):
                chosen.add(nid)
        if {n for n in own} <= chosen and key != MAIN_KEY:
            continue  # already a stage of its own
        counter += 1
        new_key = f"dp{counter}"
        label = "extract_" + ddg.node(tagged[0]).label
        stage = FunctionModel(new_key, "data_processing", DATA_PROCESSING, fn.color, label)
        stage.steps = [NodeStep(n) for n in sorted(chosen)]
        saved = list(fn.steps)
        fn.steps = [s for s in fn.steps if not (isinstance(s, NodeStep) and s.node in chosen)]
        fn.steps.append(CallStep(new_key))
        _insert_before_main(model, new_key, stage)
        try:
            solve_interfaces(model)
            order_steps(model, fn)
            order_steps(model, stage)
        except PlanError as exc:
            fn.steps = saved
            del model.fns[new_key]
            solve_interfaces(model)
            model.conflicts.append(f"cannot isolate data processing in {fn.label!r}: {exc}")
