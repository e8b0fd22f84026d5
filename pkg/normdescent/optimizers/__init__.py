from .adam import AdamState, adam_step, safe_ratio
from .shampoo import ShampooState, shampoo_step
from .prodigy import ProdigyState, prodigy_step, sign_prodigy_eta
from .descent import orthogonalize, sign_descent_step, spectral_descent_step, steepest_step
from .line_search import EscapeDiagnostics, LineSearchState, escape_diagnostics, line_search_update
from .registry import OPTIMIZERS, StepOutcome, TrainingOptimizer, build_optimizer

__all__ = [
    "AdamState", "adam_step", "safe_ratio",
    "ShampooState", "shampoo_step",
    "ProdigyState", "prodigy_step", "sign_prodigy_eta",
    "orthogonalize", "sign_descent_step", "spectral_descent_step", "steepest_step",
    "EscapeDiagnostics", "LineSearchState", "escape_diagnostics", "line_search_update",
    "OPTIMIZERS", "StepOutcome", "TrainingOptimizer", "build_optimizer",
]
