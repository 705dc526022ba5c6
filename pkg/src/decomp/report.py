"""Rendering of colored graphs, plans and quality reports."""

from __future__ import annotations

import colorsys
import json
from dataclasses import dataclass

from .ddg.graph import GOAL, SOURCE, Ddg
from .metrics import METRICS, QualityReport
from .split.coloring import Coloring, coloring_steps

DEFAULT_PALETTE = ("gray", "yellow", "purple", "green", "red")
UNCOLORED = "white"
METRIC_TITLES = {
    "global_volume": "Global code volume",
    "srp_violations": "Single responsibility",
    "info_load": "Information passing",
    "reuse_instances": "Reuse of helpers",
}


@dataclass(frozen=True)
class RenderOptions:
    palette: tuple = DEFAULT_PALETTE
    emphasize_cross_edges: bool = True
    format: str = "dot"

    def __post_init__(self):
        if not self.palette:
            raise ValueError("palette must not be empty")
        if self.format not in ("dot", "json", "md"):
            raise ValueError(f"unknown format {self.format!r}")

    def color(self, index: int) -> str:
        """Palette entry ``index``; generated colors past the end."""
        if index < len(self.palette):
            return self.palette[index]
        k = index - len(self.palette)
        hue = (k * 0.618033988749895) % 1.0
        r, g, b = colorsys.hsv_to_rgb(hue, 0.45, 0.95)
        return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def render_dot(ddg: Ddg, coloring: Coloring, options: RenderOptions = RenderOptions()) -> str:
    """A DOT digraph with nodes filled by color and cross-color edges in bold."""
    assignment = coloring.assignment
    lines = [
        "digraph ddg {",
        "  rankdir=TB;",
        '  node [style=filled, shape=box, fontname="Helvetica"];',
    ]
    sources = [n.id for n in ddg.nodes if n.kind == SOURCE]
    goals = [n.id for n in ddg.nodes if n.kind == GOAL]
    if sources:
        lines.append("  { rank=source; " + " ".join(f"n{i};" for i in sources) + " }")
    if goals:
        lines.append("  { rank=sink; " + " ".join(f"n{i};" for i in goals) + " }")
    for node in ddg.nodes:
        cid = assignment.get(node.id)
        fill = UNCOLORED if cid is None else options.color(cid)
        shape = {SOURCE: "ellipse", GOAL: "box"}.get(node.kind, "box")
        extra = ", peripheries=2" if node.kind == GOAL else ""
        label = f"print {node.label}" if node.kind == GOAL else node.label
        lines.append(
            f"  n{node.id} [label={_quote(label)}, shape={shape}, "
            f"fillcolor={_quote(fill)}{extra}];"
        )
    for u, v in ddg.edges:
        cu, cv = assignment.get(u), assignment.get(v)
        cross = cu is not None and cv is not None and cu != cv
        if cross and options.emphasize_cross_edges:
            attrs = '[color="black", style="bold"]'
        else:
            attrs = '[color="gray60"]'
        lines.append(f"  n{u} -> n{v} {attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_frames(ddg: Ddg, options: RenderOptions = RenderOptions()) -> list:
    """One DOT frame per processed goal and per collision."""
    return [render_dot(ddg, step.coloring, options) for step in coloring_steps(ddg)]


def to_json(value) -> str:
    data = value.to_dict() if hasattr(value, "to_dict") else value
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_feedback_md(report: QualityReport, title: str = "Decomposition feedback") -> str:
    lines = [f"# {title}", ""]
    lines.append(f"Overall: composite {report.composite:.2f}")
    lines.append("")
    for warning in report.warnings:
        lines.append(f"> Warning: {warning}")
        lines.append("")
    lines.append("| Metric | Submission | Reference | Score |")
    lines.append("|---|---:|---:|---:|")
    for metric, score in zip(METRICS, report.subscores):
        cand = getattr(report.candidate, metric)
        ref = getattr(report.reference, metric)
        lines.append(f"| {METRIC_TITLES[metric]} | {cand} | {ref} | {score:.2f} |")
    lines.append("")
    lines.append("## Findings")
    lines.append("")
    if not report.findings:
        lines.append("No findings.")
        lines.append("")
        return "\n".join(lines)
    for metric in METRICS:
        chosen = [f for f in report.findings if f.metric == metric]
        if not chosen:
            continue
        lines.append(f"### {METRIC_TITLES[metric]}")
        lines.append("")
        for finding in chosen:
            where = f"line {finding.span.line}" if finding.span else "program"
            lines.append(f"- {where}: {finding.message}")
        lines.append("")
    return "\n".join(lines)
