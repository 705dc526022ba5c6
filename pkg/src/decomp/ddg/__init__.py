"""Data dependency graphs, inlining and the canonical equivalence digest."""

from .canonical import CanonicalForm, canonical_form, program_form
from .graph import (
    COMPLEX,
    COMPUTATION,
    DATA_PROCESSING,
    GOAL,
    SOURCE,
    DeadCodeWarning,
    Ddg,
    DdgNode,
    build_ddg,
    dead_code,
)
from .inline import inline_program
from .interp import Outcome, run
