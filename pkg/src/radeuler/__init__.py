"""Radially symmetric ultra-relativistic Euler equations.

Submodules: ``state`` (variable transforms), ``linear`` (exact solutions of
the linearized system), ``scheme`` (staggered-grid finite-volume solver),
``diagnostics`` (measurements on solver output), ``presets``, ``config``,
``io``, ``verify`` and ``cli``.
"""

from .linear import PiecewiseData, PiecewisePV, SmoothData, boundary_limit, eval_linear
from .scheme import GridSpec, Level, build_grid, euler_update, run, step
from .state import ConservedState, DomainError, PrimitiveState, to_conserved, to_primitive

__all__ = [
    "ConservedState",
    "DomainError",
    "GridSpec",
    "Level",
    "PiecewiseData",
    "PiecewisePV",
    "PrimitiveState",
    "SmoothData",
    "boundary_limit",
    "build_grid",
    "euler_update",
    "eval_linear",
    "run",
    "step",
    "to_conserved",
    "to_primitive",
]
