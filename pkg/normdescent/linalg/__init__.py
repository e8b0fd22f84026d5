from .matrix import Matrix, LayerList, MatrixField, as_matrix, as_layers, matmul, flatten_layers
from .decompositions import SvdFactors, reduced_svd, sym_eig, spectral_norm, RANK_TOL
from .roots import RootBackend, spd_inverse_root
from .orthogonalize import (
    newton_schulz_iterates,
    normalize_for_iteration,
    orthogonalize_newton_schulz,
    orthogonalize_via_svd,
)

__all__ = [
    "Matrix", "LayerList", "MatrixField", "as_matrix", "as_layers", "matmul", "flatten_layers",
    "SvdFactors", "reduced_svd", "sym_eig", "spectral_norm", "RANK_TOL",
    "RootBackend", "spd_inverse_root",
    "newton_schulz_iterates", "normalize_for_iteration",
    "orthogonalize_newton_schulz", "orthogonalize_via_svd",
]
