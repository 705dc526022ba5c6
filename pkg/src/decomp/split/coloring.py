"""Backward coloring of a dependency graph, starting from its outputs.

Each goal gets its own color, and the walk paints every uncolored ancestor
with it. Reaching a node that another goal already painted means the value
is needed by both: that node and its ancestors move to a fresh shared
color. A node that is already shared is simply reused. Nodes that read
input stay in ``main`` so the order of reads is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NoGoalsError
from ..ddg.graph import GOAL, Ddg

MAIN = 0
MAIN_KIND = "main"
GOAL_KIND = "goal_function"
SHARED_KIND = "shared_function"


@dataclass(frozen=True)
class Coloring:
    assignment: dict  # node id -> color id
    kinds: dict  # color id -> kind
    goal_of: dict  # goal color id -> goal node id
    roots: dict = field(default_factory=dict)  # shared color id -> collided node

    def color_of(self, nid: int) -> int:
        return self.assignment[nid]

    def members(self, color: int) -> list:
        return sorted(nid for nid, c in self.assignment.items() if c == color)

    @property
    def colors(self) -> list:
        return sorted(self.kinds)

    def to_dict(self) -> dict:
        return {
            "assignment": {str(k): v for k, v in sorted(self.assignment.items())},
            "kinds": {str(k): v for k, v in sorted(self.kinds.items())},
            "goal_of": {str(k): v for k, v in sorted(self.goal_of.items())},
            "roots": {str(k): v for k, v in sorted(self.roots.items())},
        }


@dataclass(frozen=True)
class ColoringStep:
    event: str  # "goal" or "collision"
    node: int  # the goal processed, or the node that became shared
    coloring: Coloring = field(repr=False)


def color(ddg: Ddg) -> Coloring:
    """Run the procedure to completion and return the final coloring."""
    return coloring_steps(ddg)[-1].coloring


def coloring_steps(ddg: Ddg) -> list:
    """One snapshot after each processed goal and after each collision.

    Nodes not yet reached are absent from intermediate snapshots; the last
    snapshot is the final, total coloring.
    """
    if not ddg.goal_order:
        raise NoGoalsError("the program prints nothing")
    walk = _Walk(ddg)
    steps = walk.run()
    final = walk.finish()
    last = steps[-1]
    steps[-1] = ColoringStep(last.event, last.node, final)
    return steps


class _Walk:
    def __init__(self, ddg: Ddg):
        self.ddg = ddg
        self.colors = {n.id: MAIN for n in ddg.nodes if n.has_input and n.kind != GOAL}
        self.kinds = {MAIN: MAIN_KIND}
        self.goal_of = {}
        for i, gid in enumerate(ddg.goal_order, start=1):
            self.kinds[i] = GOAL_KIND
            self.goal_of[i] = gid
        self.next_color = len(ddg.goal_order) + 1
        self.roots = {}
        self.steps = []

    def snapshot(self, event, node):
        coloring = Coloring(
            dict(self.colors), dict(self.kinds), dict(self.goal_of), dict(self.roots)
        )
        self.steps.append(ColoringStep(event, node, coloring))

    def run(self) -> list:
        for current, gid in enumerate(self.ddg.goal_order, start=1):
            self.colors[gid] = current
            self._descend(gid, current)
            self.snapshot("goal", gid)
        return self.steps

    def _descend(self, start, current):
        stack = [iter(self.ddg.preds(start))]
        while stack:
            nid = next(stack[-1], None)
            if nid is None:
                stack.pop()
                continue
            held = self.colors.get(nid)
            if held is None:
                self.colors[nid] = current
                stack.append(iter(self.ddg.preds(nid)))
            elif held in (current, MAIN) or self.kinds[held] == SHARED_KIND:
                continue
            elif self.ddg.node(nid).kind == GOAL:
                continue
            elif self.ddg.node(nid).is_constant:
                # a bare constant needed by two goals is passed down from main
                self.colors[nid] = MAIN
            else:
                self._share(nid)

    def _share(self, nid):
        shared = self.next_color
        self.next_color += 1
        self.kinds[shared] = SHARED_KIND
        self.roots[shared] = nid
        self.colors[nid] = shared
        for anc in self.ddg.ancestors(nid):
            held = self.colors.get(anc)
            if held is None or held == MAIN or self.kinds[held] != GOAL_KIND:
                continue
            if self.ddg.node(anc).kind == GOAL:
                continue
            self.colors[anc] = shared
        self.snapshot("collision", nid)

    def finish(self) -> Coloring:
        colors = dict(self.colors)
        for node in self.ddg.nodes:
            colors.setdefault(node.id, MAIN)
        return Coloring(colors, dict(self.kinds), dict(self.goal_of), dict(self.roots))
