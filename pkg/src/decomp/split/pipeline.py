"""End-to-end decomposition of an undecomposed program."""

from __future__ import annotations

from dataclasses import dataclass

from ..ddg.graph import Ddg, build_ddg
from ..ddg.inline import inline_program
from ..lang.nodes import Program
from .coloring import Coloring, color
from .duplicates import find_duplicates
from .emit import emit_refactored_source
from .plan import DecompositionPlan, derive_plan
from .refine import refine_plan


@dataclass(frozen=True)
class SplitResult:
    ddg: Ddg
    coloring: Coloring
    plan: DecompositionPlan  # straight from the coloring
    duplicates: tuple
    refined: DecompositionPlan  # after collapsing duplicates and isolating stages

    @property
    def source(self) -> str:
        return emit_refactored_source(self.refined)


def split_program(program: Program, refine: bool = True) -> SplitResult:
    """Color, plan and (optionally) refine; decomposed input is inlined first."""
    flat = inline_program(program)
    ddg = build_ddg(flat)
    coloring = color(ddg)
    plan = derive_plan(ddg, coloring, flat)
    duplicates = tuple(find_duplicates(ddg))
    refined = refine_plan(plan, duplicates, ddg) if refine else plan
    return SplitResult(ddg, coloring, plan, duplicates, refined)
