"""Functional decomposition analysis for small procedural programs.

Subpackages: ``lang`` (parsing), ``ddg`` (dependency graphs and equivalence),
``split`` (coloring, plans, refactored code). Modules: ``metrics``,
``report``, ``config``, ``cli``, ``samples``.
"""

__version__ = "0.1.0"
