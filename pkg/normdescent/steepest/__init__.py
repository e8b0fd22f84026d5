from .solvers import (
    SteepestSolution,
    solve_max_of_max,
    solve_modular,
    solve_single,
    solve_spectral_layers,
    steepest_objective,
)
from .reference import check_reference_table, reference_table

__all__ = [
    "SteepestSolution", "solve_max_of_max", "solve_modular", "solve_single",
    "solve_spectral_layers", "steepest_objective", "check_reference_table", "reference_table",
]
