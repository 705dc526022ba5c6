"""A small tree-walking interpreter, used to test program transformations.

``run`` executes a program against a list of input strings and returns
the printed lines together with the name of the runtime error that stopped
it, if any. Two programs behave the same on an input vector when both
parts match.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InterpreterError
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
    Return,
    Str,
    UnaryOp,
    Var,
)

DEFAULT_STEP_LIMIT = 200_000

_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "//": lambda a, b: a // b,
    "%": lambda a, b: a % b,
    "**": lambda a, b: a ** b,
}
_COMPARE = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


@dataclass(frozen=True)
class Outcome:
    lines: tuple
    error: str = None  # exception class name, when execution failed


class _Return(Exception):
    def __init__(self, values):
        self.values = values


def run(program, inputs, step_limit: int = DEFAULT_STEP_LIMIT) -> Outcome:
    machine = _Machine(program, list(inputs), step_limit)
    try:
        machine.block(program.global_statements, {})
    except InterpreterError as exc:
        return Outcome(tuple(machine.lines), exc.message)
    except (ArithmeticError, ValueError, TypeError, IndexError, RecursionError) as exc:
        return Outcome(tuple(machine.lines), type(exc).__name__)
    return Outcome(tuple(machine.lines))


def _text(value) -> str:
    return str(value)


class _Machine:
    def __init__(self, program, inputs, step_limit):
        self.program = program
        self.inputs = inputs
        self.position = 0
        self.lines = []
        self.steps = 0
        self.step_limit = step_limit

    def tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise InterpreterError("StepLimit")

    def block(self, stmts, env):
        for stmt in stmts:
            self.stmt(stmt, env)

    def stmt(self, stmt, env):
        self.tick()
        if isinstance(stmt, Assign):
            if len(stmt.values) == 1 and len(stmt.targets) > 1:
                values = self.expr(stmt.values[0], env, multi=True)
            else:
                values = [self.expr(v, env) for v in stmt.values]
            for target, value in zip(stmt.targets, values):
                env[target] = value
        elif isinstance(stmt, ExprStmt):
            self.expr(stmt.expr, env, multi=True)
        elif isinstance(stmt, Return):
            raise _Return([self.expr(v, env) for v in stmt.values])
        elif isinstance(stmt, CompoundBlock):
            self.compound(stmt, env)

    def compound(self, block, env):
        if block.kind == "if":
            branch = block.body if self.expr(block.test, env) else block.orelse
            self.block(branch, env)
        elif block.kind == "while":
            while self.expr(block.test, env):
                self.tick()
                self.block(block.body, env)
        else:
            for item in list(self.expr(block.iter, env)):
                self.tick()
                env[block.target] = item
                self.block(block.body, env)
            env.pop(block.target, None)

    def expr(self, expr, env, multi=False):
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, Str):
            return expr.value
        if isinstance(expr, Var):
            if expr.name not in env:
                raise InterpreterError("NameError")
            return env[expr.name]
        if isinstance(expr, UnaryOp):
            return -self.expr(expr.operand, env)
        if isinstance(expr, BinOp):
            left = self.expr(expr.left, env)
            right = self.expr(expr.right, env)
            if expr.op == "**" and isinstance(right, (int, float)) and abs(right) > 10_000:
                raise OverflowError("exponent too large")
            return _BINARY[expr.op](left, right)
        if isinstance(expr, Compare):
            return _COMPARE[expr.op](self.expr(expr.left, env), self.expr(expr.right, env))
        if isinstance(expr, FStr):
            out = []
            for part in expr.parts:
                if isinstance(part, FormatField):
                    out.append(format(self.expr(part.expr, env), part.spec))
                else:
                    out.append(part)
            return "".join(out)
        if isinstance(expr, Call):
            args = [self.expr(a, env) for a in expr.args]
            fn = self.program.function(expr.name)
            if fn is not None:
                values = self.call(fn, args)
                if multi:
                    return values
                return values[0] if values else None
            return self.builtin(expr.name, args)
        raise TypeError(f"not an expression: {expr!r}")

    def call(self, fn, args):
        frame = dict(zip(fn.params, args))
        try:
            self.block(fn.body, frame)
        except _Return as ret:
            return ret.values
        return []

    def builtin(self, name, args):
        if name == "print":
            self.lines.append(" ".join(_text(a) for a in args))
            return None
        if name == "input":
            if self.position >= len(self.inputs):
                raise InterpreterError("EOFError")
            value = self.inputs[self.position]
            self.position += 1
            return value
        if name == "split":
            text = args[0]
            if not isinstance(text, str):
                raise TypeError("split() needs a string")
            return text.split(args[1]) if len(args) > 1 else text.split()
        if name == "range":
            if any(not isinstance(a, int) for a in args):
                raise TypeError("range() needs integers")
            span = range(*args)
            if len(span) > DEFAULT_STEP_LIMIT:
                raise InterpreterError("StepLimit")
            return span
        table = {"int": int, "float": float, "str": str, "len": len, "abs": abs, "round": round}
        return table[name](*args)
