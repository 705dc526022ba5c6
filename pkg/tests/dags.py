"""Random straight-line programs whose dependency graphs are arbitrary small DAGs."""

import random

from decomp.split.coloring import GOAL_KIND, MAIN, SHARED_KIND


def random_dag_program(rng: random.Random, max_nodes: int = 12, max_goals: int = 3) -> str:
    goals = rng.randint(1, max_goals)
    others = rng.randint(1, max_nodes - goals)
    names, lines = [], []
    for i in range(others):
        name = f"v{i}"
        if not names or rng.random() < 0.3:
            if rng.random() < 0.5:
                lines.append(f"{name} = float(input())")
            else:
                lines.append(f"{name} = {rng.randint(1, 9)}")
        else:
            picks = rng.sample(names, min(len(names), rng.randint(1, 2)))
            op = rng.choice(["+", "-", "*"])
            lines.append(f"{name} = " + f" {op} ".join(picks + ([str(rng.randint(2, 5))] if len(picks) == 1 else [])))
        names.append(name)
    for _ in range(goals):
        picks = rng.sample(names, min(len(names), rng.randint(1, 2)))
        lines.append("print(" + ", ".join(picks) + ")")
    return "\n".join(lines) + "\n"


def goal_reach(ddg) -> dict:
    """For every node, the set of goals it feeds (a goal feeds itself)."""
    reach = {n.id: set() for n in ddg.nodes}
    for goal in ddg.goal_order:
        reach[goal].add(goal)
        for nid in ddg.ancestors(goal):
            reach[nid].add(goal)
    return reach


def coloring_violations(ddg, coloring) -> list:
    """Compare a coloring with exhaustive reachability; return the mismatches."""
    problems = []
    reach = goal_reach(ddg)
    goal_color = {g: c for c, g in coloring.goal_of.items()}
    if set(coloring.assignment) != {n.id for n in ddg.nodes}:
        problems.append("coloring is not total")
    if len(goal_color) != len(ddg.goal_order):
        problems.append("goal colors are not one per goal")
    for node in ddg.nodes:
        c = coloring.assignment.get(node.id)
        kind = coloring.kinds.get(c)
        goals = reach[node.id]
        if node.id in goal_color:
            expected = c == goal_color[node.id] and kind == GOAL_KIND
        elif kind == SHARED_KIND:
            expected = len(goals) >= 2
        elif node.has_input or not goals:
            expected = c == MAIN
        elif len(goals) == 1:
            expected = c == goal_color[next(iter(goals))]
        else:
            # feeds several goals: shared, or main for a plain constant
            expected = node.is_constant and c == MAIN
        if not expected:
            problems.append(f"node {node.id} ({node.label}) got color {c} ({kind}), feeds {sorted(goals)}")
    return problems
