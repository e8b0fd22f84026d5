from .primal import (
    batched_norm,
    conjugate_exponent,
    flattened_linf,
    layer_norms,
    matrix_norm,
    max_of_max_norm,
    modular_norm,
    norm,
    singular_values,
    vector_norm,
)
from .duality import dual_norm, lmo_direction, lp_direction
from .oracles import brute_force_dual, operator_norm_maximizer, operator_ratios, sampled_operator_norm

__all__ = [
    "batched_norm", "conjugate_exponent", "flattened_linf", "layer_norms", "matrix_norm",
    "max_of_max_norm", "modular_norm", "norm", "singular_values", "vector_norm",
    "dual_norm", "lmo_direction", "lp_direction",
    "brute_force_dual", "operator_norm_maximizer", "operator_ratios", "sampled_operator_norm",
]
