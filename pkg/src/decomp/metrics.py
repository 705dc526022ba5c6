"""Decomposition-quality measurements and reference-based scoring.

Four measurements are taken on a program:

* ``global_volume``: executable statements outside functions, not counting
  one trailing call to a user function (the usual ``main()``);
* ``srp_violations``: functions other than ``main`` that both print and
  return a value;
* ``info_load``: parameters plus returned values, summed over functions;
* ``reuse_instances``: functions calling no other user function that are
  called from at least two different functions.

The first three are lower-is-better and score ``(1 + ref) / (1 + max(ref,
cand))``. Reuse scores ``min(cand, ref) / ref``, or 1 when the reference
has none.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import WeightError
from .lang.checks import call_graph
from .lang.nodes import (
    Call,
    ExprStmt,
    Program,
    Span,
    contains_print,
    expr_calls,
    iter_stmts,
    stmt_exprs,
)

METRICS = ("global_volume", "srp_violations", "info_load", "reuse_instances")
GLOBAL_CALLER = "<global>"
DEFAULT_WEIGHTS = (1.0, 1.0, 1.0, 1.0)
DEFAULT_PARAM_THRESHOLD = 4


@dataclass(frozen=True)
class FunctionStats:
    params: int
    returns: int
    prints: bool
    calls: tuple
    level: int
    line: int = 0

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "returns": self.returns,
            "prints": self.prints,
            "calls": list(self.calls),
            "level": self.level,
        }


@dataclass(frozen=True)
class Measurements:
    global_volume: int
    srp_violations: int
    info_load: int
    reuse_instances: int
    per_function: dict = field(default_factory=dict)
    reused: tuple = ()  # names of the reused functions

    def values(self) -> tuple:
        return tuple(getattr(self, m) for m in METRICS)

    def to_dict(self) -> dict:
        out = {m: getattr(self, m) for m in METRICS}
        out["reused"] = list(self.reused)
        out["per_function"] = {k: v.to_dict() for k, v in sorted(self.per_function.items())}
        return out


@dataclass(frozen=True)
class Finding:
    metric: str
    span: Optional[Span]
    message: str

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "line": self.span.line if self.span else 0,
            "col": self.span.column if self.span else 0,
            "message": self.message,
        }


@dataclass(frozen=True)
class QualityReport:
    candidate: Measurements
    reference: Measurements
    subscores: tuple  # s1..s4
    weights: tuple
    composite: float
    findings: tuple = ()
    equivalent: bool = True
    warnings: tuple = ()

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate.to_dict(),
            "reference": self.reference.to_dict(),
            "subscores": {f"s{i}": s for i, s in enumerate(self.subscores, start=1)},
            "weights": list(self.weights),
            "composite": self.composite,
            "findings": [f.to_dict() for f in self.findings],
            "equivalent": self.equivalent,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------- measure


def _trailing_call(program: Program):
    stmts = program.global_statements
    if not stmts or not program.functions:
        return None
    last = stmts[-1]
    if (
        isinstance(last, ExprStmt)
        and isinstance(last.expr, Call)
        and program.function(last.expr.name) is not None
    ):
        return last
    return None


def global_statements(program: Program) -> list:
    """Executable global statements, nested ones included, minus the driver call."""
    trailing = _trailing_call(program)
    return [s for s in iter_stmts(program.global_statements) if s is not trailing]


def _levels(graph) -> dict:
    levels = {}

    def level(name):
        if name not in levels:
            callees = graph.get(name, [])
            levels[name] = 0 if not callees else 1 + max(level(c) for c in callees)
        return levels[name]

    for name in graph:
        level(name)
    return levels


def _global_callees(program) -> list:
    names = program.function_names
    out = []
    for stmt in iter_stmts(program.global_statements):
        for expr in stmt_exprs(stmt):
            for call in expr_calls(expr):
                if call.name in names and call.name not in out:
                    out.append(call.name)
    return out


def measure(program: Program) -> Measurements:
    graph = call_graph(program)
    levels = _levels(graph)
    callers = {fn.name: set() for fn in program.functions}
    for name, callees in graph.items():
        for callee in callees:
            callers[callee].add(name)
    for callee in _global_callees(program):
        callers[callee].add(GLOBAL_CALLER)

    per_function = {}
    srp = info = 0
    reused = []
    for fn in program.functions:
        prints = any(contains_print(s) for s in fn.body)
        stats = FunctionStats(
            len(fn.params),
            fn.return_arity,
            prints,
            tuple(graph[fn.name]),
            levels[fn.name],
            fn.span.line if fn.span else 0,
        )
        per_function[fn.name] = stats
        info += stats.params + stats.returns
        if fn.name != "main" and prints and stats.returns > 0:
            srp += 1
        if fn.name != "main" and stats.level == 0 and len(callers[fn.name]) >= 2:
            reused.append(fn.name)
    return Measurements(
        global_volume=len(global_statements(program)),
        srp_violations=srp,
        info_load=info,
        reuse_instances=len(reused),
        per_function=per_function,
        reused=tuple(reused),
    )


# ---------------------------------------------------------------- compare


def lower_is_better(cand: float, ref: float) -> float:
    return (1 + ref) / (1 + max(ref, cand))


def reuse_score(cand: float, ref: float) -> float:
    if ref <= 0:
        return 1.0
    return min(cand, ref) / ref


def subscores(candidate: Measurements, reference: Measurements) -> tuple:
    return (
        lower_is_better(candidate.global_volume, reference.global_volume),
        lower_is_better(candidate.srp_violations, reference.srp_violations),
        lower_is_better(candidate.info_load, reference.info_load),
        reuse_score(candidate.reuse_instances, reference.reuse_instances),
    )


def check_weights(weights) -> tuple:
    weights = tuple(float(w) for w in weights)
    if len(weights) != 4:
        raise WeightError(f"expected 4 weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise WeightError("weights must not be negative")
    if sum(weights) == 0:
        raise WeightError("at least one weight must be positive")
    return weights


def compare(
    candidate: Measurements,
    reference: Measurements,
    weights=DEFAULT_WEIGHTS,
    equivalent: bool = True,
    findings=(),
) -> QualityReport:
    weights = check_weights(weights)
    scores = subscores(candidate, reference)
    composite = sum(w * s for w, s in zip(weights, scores)) / sum(weights)
    warnings = ()
    if not equivalent:
        warnings = ("submission is not equivalent to the reference: its outputs differ",)
    return QualityReport(
        candidate, reference, scores, weights, composite, tuple(findings), equivalent, warnings
    )


# --------------------------------------------------------------- findings


def flag_findings(
    program: Program,
    measurements: Measurements = None,
    param_threshold: int = DEFAULT_PARAM_THRESHOLD,
    reference: Measurements = None,
) -> list:
    if measurements is None:
        measurements = measure(program)
    findings = []
    for fn in program.functions:
        stats = measurements.per_function[fn.name]
        if fn.name != "main" and stats.prints and stats.returns > 0:
            findings.append(
                Finding(
                    "srp_violations",
                    fn.span,
                    f"function {fn.name!r} both prints and returns a value",
                )
            )
        if stats.params > param_threshold:
            findings.append(
                Finding(
                    "info_load",
                    fn.span,
                    f"function {fn.name!r} takes {stats.params} parameters "
                    f"(more than {param_threshold})",
                )
            )
    for stmt in global_statements(program):
        findings.append(
            Finding("global_volume", stmt.span, "statement runs in global scope")
        )
    if reference is not None and measurements.reuse_instances < reference.reuse_instances:
        anchor = program.functions[0].span if program.functions else None
        if anchor is None and program.global_statements:
            anchor = program.global_statements[0].span
        missing = reference.reuse_instances - measurements.reuse_instances
        names = ", ".join(reference.reused)
        findings.append(
            Finding(
                "reuse_instances",
                anchor,
                f"{missing} fewer reused helper(s) than the reference ({names})",
            )
        )
    findings.sort(key=lambda f: ((f.span.line, f.span.column) if f.span else (0, 0), f.metric))
    return findings


def score_programs(
    candidate: Program,
    reference: Program,
    weights=DEFAULT_WEIGHTS,
    param_threshold: int = DEFAULT_PARAM_THRESHOLD,
) -> QualityReport:
    """Measure both programs, check equivalence and build the full report."""
    from .ddg.canonical import program_form

    cand_m = measure(candidate)
    ref_m = measure(reference)
    equivalent = program_form(candidate) == program_form(reference)
    findings = flag_findings(candidate, cand_m, param_threshold, ref_m)
    return compare(cand_m, ref_m, weights, equivalent, findings)
