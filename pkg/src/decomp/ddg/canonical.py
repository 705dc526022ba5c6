"""Rename-invariant digests of dependency graphs.

Every variable is replaced by the normal form of the value it holds, so
the digest ignores names, copies and how expressions are split across
statements. Multiplication and division chains are flattened along their
left spine and literal factors are folded into one exact coefficient;
everything else keeps its tree shape. ``input()`` calls are identified by
their position in the sequence of reads, since a prompt carries no data.

Blocks are executed symbolically. An ``if`` produces a guarded value per
written variable. A loop is summarised by a signature over its body with
the entry values replaced by positional placeholders; its results refer
to that signature.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..lang.nodes import (
    Assign,
    BinOp,
    Call,
    Compare,
    CompoundBlock,
    ExprStmt,
    FormatField,
    FStr,
    Num,
    Str,
    UnaryOp,
    Var,
)
from .graph import GOAL, Ddg

_MAX_PERMUTATIONS = 720


@dataclass(frozen=True)
class NF:
    tag: str
    payload: str = ""
    children: tuple = ()
    digest: str = field(default="", compare=False)
    # numeric or text value of a constant
    value: object = field(default=None, compare=False)
    # multiplicative chain: coefficient * prod(nums) / prod(dens)
    coef: Fraction = field(default=None, compare=False)
    nums: tuple = field(default=(), compare=False)
    dens: tuple = field(default=(), compare=False)

    def __eq__(self, other):
        return isinstance(other, NF) and self.digest == other.digest

    def __hash__(self):
        return hash(self.digest)


def _make(tag, payload="", children=(), **extra) -> NF:
    h = hashlib.blake2b(digest_size=16)
    h.update(f"{tag}\x00{payload}\x00{len(children)}".encode())
    for child in children:
        h.update(b"\x01" + child.digest.encode())
    return NF(tag, payload, tuple(children), h.hexdigest(), **extra)


def const(value) -> NF:
    if isinstance(value, bool):
        return _make("bool", str(value), value=value)
    if isinstance(value, str):
        return _make("str", value, value=value)
    if isinstance(value, float) and value != value:
        return _make("num", "nan")
    value = Fraction(value)
    return _make("num", str(value), value=value)


def leaf(tag, payload="") -> NF:
    return _make(tag, str(payload))


def op(name, *children) -> NF:
    return _make("op", name, children)


def _is_number(nf) -> bool:
    return nf.tag == "num" and isinstance(nf.value, Fraction)


def _chain_parts(nf):
    if nf.tag == "chain":
        return nf.coef, list(nf.nums), list(nf.dens)
    if _is_number(nf):
        return nf.value, [], []
    return Fraction(1), [nf], []


def _finish_chain(coef, nums, dens) -> NF:
    if not nums and not dens:
        return const(coef)
    if coef == 1 and len(nums) == 1 and not dens:
        return nums[0]
    children = tuple(nums) + tuple(dens)
    payload = f"{coef}/{len(nums)}"
    return _make("chain", payload, children, coef=coef, nums=tuple(nums), dens=tuple(dens))


def mul(a, b) -> NF:
    coef, nums, dens = _chain_parts(a)
    if _is_number(b):
        coef *= b.value
    else:
        nums.append(b)
    return _finish_chain(coef, nums, dens)


def div(a, b) -> NF:
    coef, nums, dens = _chain_parts(a)
    if _is_number(b) and b.value != 0:
        coef /= b.value
    else:
        dens.append(b)
    return _finish_chain(coef, nums, dens)


def neg(a) -> NF:
    if _is_number(a):
        return const(-a.value)
    return op("neg", a)


UNDEFINED = leaf("undefined")


# ------------------------------------------------------------ expression NFs


class _Evaluator:
    """Turns expressions into normal forms under a variable environment."""

    def __init__(self, input_ordinal: int = 0):
        self.ordinal = input_ordinal

    def expr(self, expr, env) -> NF:
        if isinstance(expr, Num):
            return const(expr.value)
        if isinstance(expr, Str):
            return const(expr.value)
        if isinstance(expr, Var):
            return env.get(expr.name, UNDEFINED)
        if isinstance(expr, UnaryOp):
            return neg(self.expr(expr.operand, env))
        if isinstance(expr, BinOp):
            left = self.expr(expr.left, env)
            right = self.expr(expr.right, env)
            if expr.op == "*":
                return mul(left, right)
            if expr.op == "/":
                return div(left, right)
            return op(expr.op, left, right)
        if isinstance(expr, Compare):
            return op(expr.op, self.expr(expr.left, env), self.expr(expr.right, env))
        if isinstance(expr, Call):
            if expr.name == "input":
                nf = leaf("input", self.ordinal)
                self.ordinal += 1
                return nf
            args = [self.expr(arg, env) for arg in expr.args]
            return _make("call", expr.name, args)
        if isinstance(expr, FStr):
            parts = []
            for part in expr.parts:
                if isinstance(part, FormatField):
                    parts.append(_make("field", part.spec, (self.expr(part.expr, env),)))
                else:
                    parts.append(const(part))
            return _make("fstr", "", parts)
        raise TypeError(f"not an expression: {expr!r}")

    # --------------------------------------------------------- statements

    def stmts(self, stmts, env, outputs, depth):
        for stmt in stmts:
            self.stmt(stmt, env, outputs, depth)

    def stmt(self, stmt, env, outputs, depth):
        if isinstance(stmt, Assign):
            values = [self.expr(v, env) for v in stmt.values]
            for target, value in zip(stmt.targets, values):
                env[target] = value
        elif isinstance(stmt, ExprStmt):
            value = self.expr(stmt.expr, env)
            if isinstance(stmt.expr, Call) and stmt.expr.name == "print":
                outputs.append(value)
            elif _has_leaf(value, "input"):
                outputs.append(_make("effect", "", (value,)))
        elif isinstance(stmt, CompoundBlock):
            if stmt.kind == "if":
                self._if(stmt, env, outputs, depth)
            else:
                self._loop(stmt, env, outputs, depth)
        else:
            raise TypeError(f"unexpected statement {stmt!r}")

    def _if(self, block, env, outputs, depth):
        cond = self.expr(block.test, env)
        then_env, then_out = dict(env), []
        else_env, else_out = dict(env), []
        self.stmts(block.body, then_env, then_out, depth)
        self.stmts(block.orelse, else_env, else_out, depth)
        for var in sorted(block.defined_vars):
            env[var] = _make(
                "ite",
                "",
                (cond, then_env.get(var, UNDEFINED), else_env.get(var, UNDEFINED)),
            )
        if then_out or else_out:
            outputs.append(
                _make("ite_out", "", (cond, _make("seq", "", then_out), _make("seq", "", else_out)))
            )

    def _loop(self, block, env, outputs, depth):
        header = self.expr(block.iter, env) if block.kind == "for" else None
        names = sorted((block.used_vars | block.defined_vars) - {block.target})
        carried = [v for v in names if v in env]
        written = sorted(block.defined_vars)
        start = self.ordinal

        # tied entry values are ordered by trying every assignment of slots
        groups = {}
        for var in carried:
            groups.setdefault(env[var].digest, []).append(var)
        ordered_groups = [groups[d] for d in sorted(groups)]
        perms = [list(itertools.permutations(g)) for g in ordered_groups]
        total = 1
        for p in perms:
            total *= len(p)
        if total > _MAX_PERMUTATIONS:
            perms = [[tuple(g)] for g in ordered_groups]

        best = None
        for choice in itertools.product(*perms):
            self.ordinal = start
            slots = {}
            for group in choice:
                for var in group:
                    slots[var] = len(slots)
            candidate = self._loop_body(block, env, slots, written, header, depth)
            if best is None or candidate[0].digest < best[0].digest:
                best = candidate
        signature, exits, has_output = best
        for var, key in exits.items():
            env[var] = _make("loopout", key, (signature,))
        if has_output:
            outputs.append(_make("loop_effect", "", (signature,)))

    def _loop_body(self, block, env, slots, written, header, depth):
        inner = {var: leaf("entry", f"{depth}:{slot}") for var, slot in slots.items()}
        if block.kind == "for":
            inner[block.target] = leaf("item", depth)
        body_out = []
        test = self.expr(block.test, inner) if block.kind == "while" else None
        self.stmts(block.body, inner, body_out, depth + 1)
        exit_values = []
        exits = {}
        for var in written:
            if var in slots:
                key = f"s{slots[var]}"
            else:
                key = f"n{inner[var].digest}"
            exits[var] = key
            exit_values.append(_make("exit", key, (inner[var],)))
        entries = sorted(slots.items(), key=lambda kv: kv[1])
        children = [env[var] for var, _ in entries]
        parts = [
            _make("entries", "", children),
            _make("exits", "", sorted(exit_values, key=lambda nf: nf.payload)),
            _make("seq", "", body_out),
        ]
        if header is not None:
            parts.insert(0, header)
        if test is not None:
            parts.insert(0, test)
        signature = _make("loop", block.kind, parts)
        return signature, exits, bool(body_out)


def _has_leaf(nf, tag) -> bool:
    stack = [nf]
    while stack:
        cur = stack.pop()
        if cur.tag == tag:
            return True
        stack.extend(cur.children)
    return False


# ------------------------------------------------------------ graph digests


@dataclass(frozen=True)
class CanonicalForm:
    goal_digests: tuple  # per goal, in goal order
    program_digest: str  # digest of the sorted multiset of goal digests

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.program_digest == other.program_digest

    def __hash__(self):
        return hash(self.program_digest)

    def to_dict(self) -> dict:
        return {"goals": list(self.goal_digests), "program": self.program_digest}


def node_values(ddg: Ddg) -> tuple:
    """Normal forms of every written value and every goal's output.

    Returns ``(values, outputs)`` where ``values`` maps ``(node id, var)``
    to a normal form and ``outputs`` maps goal ids to the normal form of
    what they print.
    """
    values = {}
    outputs = {}
    for node in ddg.nodes:
        env = {var: values[(pid, var)] for var, pid in node.bindings}
        evaluator = _Evaluator(node.inputs_before)
        printed = []
        evaluator.stmt(node.stmt, env, printed, 0)
        for var in node.writes:
            values[(node.id, var)] = env.get(var, UNDEFINED)
        if node.kind == GOAL:
            outputs[node.id] = _make("goal", "", printed)
    return values, outputs


def canonical_form(ddg: Ddg) -> CanonicalForm:
    _, outputs = node_values(ddg)
    digests = tuple(outputs[gid].digest for gid in ddg.goal_order)
    h = hashlib.blake2b(digest_size=16)
    for digest in sorted(digests):
        h.update(digest.encode())
    return CanonicalForm(digests, h.hexdigest())


def program_form(program) -> CanonicalForm:
    """Canonical form of any valid program, inlining user functions first."""
    from .graph import build_ddg
    from .inline import inline_program

    return canonical_form(build_ddg(inline_program(program)))
