"""Backward coloring, decomposition plans, refinement and code emission."""

from .coloring import MAIN, Coloring, ColoringStep, color, coloring_steps
from .duplicates import DuplicateGroup, find_duplicates
from .emit import emit_refactored_source
from .pipeline import SplitResult, split_program
from .plan import (
    DecompositionPlan,
    PlanError,
    PlannedFunction,
    check_plan,
    derive_plan,
    localize_shared,
)
from .refine import refine_plan
