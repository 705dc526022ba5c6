"""Detection of repeated computations.

Two kinds of repetition are found:

* alpha-equivalent computations, whose expressions are identical once
  variables are replaced by numbered holes. A match grows upward through
  producers that feed only the matched node and are themselves equal, so
  the reported subgraphs are maximal;
* constant-factor computations, identical except for one numeric literal
  in the multiplication/division chain at the root. The factor is the
  ratio between the largest and smallest multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..ddg.graph import COMPUTATION, Ddg
from ..lang.nodes import Assign, BinOp, Call, Num, UnaryOp, Var, iter_subexprs
from ..lang.printer import format_expr
from ..lang.rewrite import substitute

ALPHA = "alpha"
CONSTANT_FACTOR = "constant_factor"


@dataclass(frozen=True)
class DuplicateGroup:
    kind: str
    members: tuple  # root node ids, source order
    template: str
    # per member: the root, then absorbed producers (aligned across members)
    covered: tuple = ()
    factor: Optional[Fraction] = None
    multipliers: tuple = ()  # per member, constant-factor groups only

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "members": list(self.members),
            "template": self.template,
            "covered": [list(c) for c in self.covered],
        }
        if self.factor is not None:
            out["factor"] = str(self.factor)
            out["multipliers"] = [str(m) for m in self.multipliers]
        return out


def _candidate(node) -> bool:
    if node.kind != COMPUTATION or not isinstance(node.stmt, Assign) or node.has_input:
        return False
    return any(isinstance(e, (BinOp, UnaryOp, Call)) for e in iter_subexprs(node.stmt.values[0]))


def _holed(node):
    holes = {var: Var(f"#{k}") for k, (var, _) in enumerate(node.bindings)}
    return substitute(node.stmt.values[0], holes)


def root_chain(expr) -> list:
    """Operands of the left-spine ``*``/``/`` chain as ``(op, operand)``."""
    parts = []
    while isinstance(expr, BinOp) and expr.op in ("*", "/"):
        parts.append((expr.op, expr.right))
        expr = expr.left
    parts.append(("*", expr))
    parts.reverse()
    return parts


def strip_literal(expr):
    """Return ``(key, multiplier, literal position)`` or None.

    At most one numeric literal may sit in the root chain. It is removed from
    the key and turned into a multiplier; without one the multiplier is 1.
    """
    parts = root_chain(expr)
    literals = [i for i, (_, operand) in enumerate(parts) if isinstance(operand, Num)]
    if len(literals) > 1:
        return None
    if not literals:
        key = tuple((op, format_expr(operand)) for op, operand in parts)
        return key, Fraction(1), None
    pos = literals[0]
    op, lit = parts[pos]
    value = Fraction(lit.value)
    if value == 0:
        return None
    multiplier = value if op == "*" else 1 / value
    rest = [p for i, p in enumerate(parts) if i != pos]
    if not rest:
        return None
    # the first remaining operand is always multiplied in
    key = (("*", format_expr(rest[0][1])),) + tuple(
        (o, format_expr(operand)) for o, operand in rest[1:]
    )
    return key, multiplier, pos


def find_duplicates(ddg: Ddg) -> list:
    candidates = [node for node in ddg.nodes if _candidate(node)]
    groups = []
    claimed = set()

    by_key = {}
    for node in candidates:
        stripped = strip_literal(_holed(node))
        if stripped is None:
            continue
        by_key.setdefault(stripped[0], []).append((node.id, stripped[1]))
    for key, entries in by_key.items():
        multipliers = {m for _, m in entries}
        if len(entries) < 2 or len(multipliers) < 2:
            continue
        members = tuple(nid for nid, _ in entries)
        mults = tuple(m for _, m in entries)
        groups.append(
            DuplicateGroup(
                CONSTANT_FACTOR,
                members,
                " ".join(f"{op} {text}" for op, text in key),
                covered=tuple((nid,) for nid in members),
                factor=max(mults) / min(mults),
                multipliers=mults,
            )
        )
        claimed.update(members)

    by_signature = {}
    for node in candidates:
        by_signature.setdefault(node.op_signature, []).append(node.id)
    alpha = []
    for signature, members in by_signature.items():
        if len(members) < 2 or set(members) <= claimed:
            continue
        covered = _grow(ddg, members)
        if covered is None:
            continue
        alpha.append(DuplicateGroup(ALPHA, tuple(members), signature, covered=covered))
    absorbed = set()
    for group in alpha:
        for cover in group.covered:
            absorbed.update(cover[1:])
    for group in alpha:
        if not set(group.members) <= absorbed:
            groups.append(group)
    groups.sort(key=lambda g: g.members)
    return groups


def _private_producer(ddg, consumer, pid) -> bool:
    node = ddg.node(pid)
    if not _candidate(node):
        return False
    if ddg.succs(pid) != [consumer]:
        return False
    return sum(1 for _, p in ddg.node(consumer).bindings if p == pid) == 1


def _grow(ddg, members) -> Optional[tuple]:
    """Absorb aligned private producers; None if members overlap."""
    covered = [[m] for m in members]
    frontier = [tuple(members)]
    while frontier:
        aligned = frontier.pop()
        first = ddg.node(aligned[0])
        for k in range(len(first.bindings)):
            producers = tuple(ddg.node(m).bindings[k][1] for m in aligned)
            if len(set(producers)) != len(producers):
                continue
            if not all(_private_producer(ddg, m, p) for m, p in zip(aligned, producers)):
                continue
            signatures = {ddg.node(p).op_signature for p in producers}
            if len(signatures) != 1:
                continue
            for i, p in enumerate(producers):
                covered[i].append(p)
            frontier.append(producers)
    flat = [n for cover in covered for n in cover]
    if len(flat) != len(set(flat)):
        return None
    return tuple(tuple(cover) for cover in covered)
